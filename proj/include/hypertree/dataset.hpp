#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hypertree/vertex_set.hpp"

namespace hypertree {

struct VariableSpec {
    std::string name;
    int arity = 2;
};

// Probability table over a vertex subset. Cells are indexed row-major over the
// scope's members in ascending vertex order, last member fastest.
class MarginalTable {
public:
    MarginalTable(VertexSet scope, std::vector<int> arities, std::vector<double> probs);

    VertexSet scope() const { return scope_; }
    const std::vector<int>& arities() const { return arities_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }

    // Cell index of a scope-local assignment (one entry per scope member).
    std::size_t index_of(std::span<const int> local) const;

    // Sums out variable v, which must be in the scope.
    MarginalTable sum_out(int v) const;

private:
    VertexSet scope_;
    std::vector<int> arities_;
    std::vector<double> probs_;
};

// Shannon entropy in nats, with 0 ln 0 = 0.
double entropy(const MarginalTable& m);

// Anything that can hand out exact marginals over variable subsets: an
// empirical sample or an explicit joint table.
class MarginalSource {
public:
    virtual ~MarginalSource() = default;

    virtual int num_vars() const = 0;
    virtual int arity(int v) const = 0;
    virtual MarginalTable marginal(VertexSet scope) const = 0;

    // Entropy of the full joint distribution.
    virtual double joint_entropy() const = 0;

    // Visits each full assignment with positive probability exactly once.
    virtual void for_each_support_point(
        const std::function<void(std::span<const int>, double)>& visit) const = 0;

    std::vector<int> arities() const;
    double entropy(VertexSet scope) const { return hypertree::entropy(marginal(scope)); }

    // Product of all arities, saturating at UINT64_MAX.
    std::uint64_t joint_space_size() const;

protected:
    void check_scope(VertexSet scope) const;
};

// Categorical observations. Rows may carry integer multiplicities; the sample
// size counts every copy.
class Dataset final : public MarginalSource {
public:
    Dataset(std::vector<VariableSpec> specs, std::vector<std::int32_t> flat_rows);
    Dataset(std::vector<VariableSpec> specs, std::vector<std::int32_t> flat_rows,
            std::vector<std::uint64_t> multiplicities);

    int num_vars() const override { return static_cast<int>(specs_.size()); }
    int arity(int v) const override { return specs_.at(v).arity; }
    MarginalTable marginal(VertexSet scope) const override;
    double joint_entropy() const override;
    void for_each_support_point(
        const std::function<void(std::span<const int>, double)>& visit) const override;

    const std::vector<VariableSpec>& specs() const { return specs_; }
    std::size_t num_rows() const { return num_rows_; }
    std::uint64_t sample_size() const { return total_; }
    std::span<const std::int32_t> row(std::size_t i) const;
    std::uint64_t multiplicity(std::size_t i) const {
        return multiplicities_.empty() ? 1 : multiplicities_[i];
    }

    // Integer cell counts over a scope, same layout as marginal().
    std::vector<std::uint64_t> counts(VertexSet scope) const;

    // Distinct full rows with their total counts.
    std::map<std::vector<int>, std::uint64_t> distinct_rows() const;

private:
    std::vector<VariableSpec> specs_;
    std::vector<std::int32_t> rows_;
    std::vector<std::uint64_t> multiplicities_;
    std::size_t num_rows_ = 0;
    std::uint64_t total_ = 0;
};

// Explicit joint distribution, row-major with the last variable fastest.
class JointTable final : public MarginalSource {
public:
    JointTable(std::vector<int> arities, std::vector<double> probs);

    int num_vars() const override { return static_cast<int>(arities_.size()); }
    int arity(int v) const override { return arities_.at(v); }
    MarginalTable marginal(VertexSet scope) const override;
    double joint_entropy() const override;
    void for_each_support_point(
        const std::function<void(std::span<const int>, double)>& visit) const override;

    const std::vector<double>& probs() const { return probs_; }
    double prob(std::span<const int> x) const;

private:
    std::vector<int> arities_;
    std::vector<double> probs_;
};

// H({u}) + H({v}) - H({u,v}), clamped to zero when within 1e-12 below it.
double mutual_information(const MarginalSource& source, int u, int v);

using ArityOverrides = std::map<std::string, int>;

// Reads a headed CSV of integer outcome codes. Arities are max code + 1 unless
// overridden by name.
Dataset load_dataset(std::istream& in, const ArityOverrides& overrides = {});
Dataset load_dataset_file(const std::string& path, const ArityOverrides& overrides = {});

// {"arities": {"name": m, ...}}
ArityOverrides parse_arity_sidecar(const std::string& json_text);

// {"arities": [...], "probs": [...]}
JointTable parse_joint_table(const std::string& json_text);

// Writes header plus one line per observation (multiplicities expanded).
void write_dataset_csv(std::ostream& out, const Dataset& data);

}  // namespace hypertree
