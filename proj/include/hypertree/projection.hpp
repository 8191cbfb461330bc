#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hypertree/dataset.hpp"
#include "hypertree/structure.hpp"
#include "hypertree/weights.hpp"

namespace hypertree {

// Log-probability of an outcome that some clique marginal rules out. Always
// produced explicitly, never as log(0); test with is_impossible().
inline constexpr double kImpossible = -std::numeric_limits<double>::infinity();
inline bool is_impossible(double log_prob) { return log_prob == kImpossible; }

// One clique factor; same cell layout as MarginalTable.
struct Factor {
    VertexSet scope;
    std::vector<int> arities;
    std::vector<double> values;

    // Cell of the factor selected by a full assignment over all variables.
    std::size_t cell(std::span<const int> full) const;
};

// The distribution on a k-tree that matches the target on every clique
// marginal. Factors exist for every clique including singletons, ordered by
// size then lexicographically, and each depends only on its own marginal.
class ProjectedModel {
public:
    ProjectedModel(KTree tree, std::vector<VariableSpec> variables, std::vector<Factor> factors,
                   std::vector<MarginalTable> clique_marginals);

    const KTree& tree() const { return tree_; }
    const std::vector<VariableSpec>& variables() const { return variables_; }
    const std::vector<Factor>& factors() const { return factors_; }
    const std::vector<MarginalTable>& clique_marginals() const { return marginals_; }
    const Factor* find(VertexSet scope) const;

private:
    KTree tree_;
    std::vector<VariableSpec> variables_;
    std::vector<Factor> factors_;
    std::vector<MarginalTable> marginals_;
};

// phi_h = P_h / prod of phi over proper non-empty subsets, bottom-up. Cells
// with zero target marginal get a zero factor.
ProjectedModel project(const MarginalSource& source, const KTree& tree);

// Sum of log factors, or kImpossible when a factor is zero.
double model_log_prob(const ProjectedModel& model, std::span<const int> x);

// Full joint of the model, row-major with the last variable fastest. Refuses
// joint spaces above 2^20 cells.
std::vector<double> model_joint(const ProjectedModel& model);

// Sum of single-variable entropies minus the joint entropy.
double divergence_to_independent(const MarginalSource& source);

// Divergence of the target from the structure via clique weights.
double divergence_decomposed(const MarginalSource& source, const WeightFunction& wf, const KTree& tree);

// Divergence computed directly over the target's support. Refuses joint
// spaces above 2^20 cells.
double divergence_direct(const MarginalSource& source, const ProjectedModel& model);

inline constexpr std::uint64_t kMaxEnumerableJoint = std::uint64_t{1} << 20;

// Sum of model_log_prob over all observations (multiplicities counted);
// kImpossible if any observation is impossible. Rows are evaluated in
// parallel and summed in a fixed pairwise order.
double log_likelihood(const ProjectedModel& model, const Dataset& data);

namespace serial {

// Plain left-to-right loop; reference for the parallel version.
double log_likelihood(const ProjectedModel& model, const Dataset& data);

}  // namespace serial

}  // namespace hypertree
