#pragma once

#include <span>
#include <vector>

#include "hypertree/dataset.hpp"
#include "hypertree/vertex_set.hpp"

namespace hypertree {

// Clique weights in nats for every vertex subset of size 1..k+1 over n
// vertices. Subsets of one size are stored in colex order.
class WeightFunction {
public:
    WeightFunction(int n, int k);

    int n() const { return n_; }
    int k() const { return k_; }

    double at(VertexSet h) const { return levels_[level_of(h)][colex_rank(h)]; }
    void set(VertexSet h, double w) { levels_[level_of(h)][colex_rank(h)] = w; }

    // Weights of all subsets of the given size (1..k+1), colex order.
    std::span<const double> level(int size) const { return levels_.at(size - 1); }
    std::span<double> level(int size) { return levels_.at(size - 1); }

    // Copy with every weight of size >= 2 multiplied by c; singletons unchanged.
    WeightFunction scaled(double c) const;

private:
    std::size_t level_of(VertexSet h) const;

    int n_;
    int k_;
    std::vector<std::vector<double>> levels_;
};

// Entropies of every subset of size 1..max_size, by size then colex order.
using EntropyLevels = std::vector<std::vector<double>>;

// OpenMP kernel: one marginal per subset, subsets of a size in parallel.
EntropyLevels subset_entropies(const MarginalSource& source, int max_size);

// Weights from the recursion w(h) = -H(h) - sum of w over proper non-empty
// subsets, built bottom-up by subset size. Requires 1 <= k <= n-1.
WeightFunction compute_weights(const MarginalSource& source, int k);
WeightFunction weights_from_entropies(const EntropyLevels& entropies, int n, int k);

namespace serial {

// Single-threaded reference for subset_entropies/compute_weights. Keeps its
// own map-keyed tables so it shares no indexing code with the parallel path.
EntropyLevels subset_entropies(const MarginalSource& source, int max_size);
WeightFunction compute_weights(const MarginalSource& source, int k);

}  // namespace serial

// Closed-form alternating sum of marginal entropies:
// w(h) = -sum_{h' subset of h, non-empty} (-1)^{|h|-|h'|} H(h').
double weight_inclusion_exclusion(const MarginalSource& source, VertexSet h);

// Sum of w(h') over every h' subset of h containing v, singleton included.
// Equals H(h \ {v}) - H(h) for weights computed from a distribution.
double monotone_deficit(const WeightFunction& wf, VertexSet h, int v);

// Total weight of the cliques created by joining v to every vertex of anchor:
// sum of w(S + v) over non-empty S subset of anchor. For weights computed from
// a distribution this equals I(X_v ; X_anchor).
double attachment_gain(const WeightFunction& wf, int v, VertexSet anchor);

// Sum of w(h) over every h subset of clique with |h| >= 2.
double clique_weight(const WeightFunction& wf, VertexSet clique);

// Smallest attachment_gain(v, h \ {v}) over all h of size 2..k+1 and v in h.
// A weight function is monotone on cliques when this is non-negative.
double min_monotone_gain(const WeightFunction& wf);

}  // namespace hypertree
