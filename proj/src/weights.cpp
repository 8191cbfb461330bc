#include "hypertree/weights.hpp"

#include <algorithm>
#include <limits>

#include "hypertree/errors.hpp"

namespace hypertree {

namespace {

constexpr std::uint64_t kMaxWeightEntries = std::uint64_t{1} << 27;

void check_width(int n, int k) {
    if (n < 2) throw ValidationError("need at least two variables");
    if (k < 1 || k > n - 1)
        throw ValidationError("width k=" + std::to_string(k) + " outside [1, " + std::to_string(n - 1) + "]");
}

}  // namespace

WeightFunction::WeightFunction(int n, int k) : n_(n), k_(k) {
    if (n < 1 || n > kMaxVertices) throw ValidationError("vertex count outside [1, 64]");
    if (k < 0 || k > n - 1) throw ValidationError("width outside [0, n-1]");
    std::uint64_t total = 0;
    for (int s = 1; s <= k + 1; ++s) {
        total += binomial(n, s);
        if (total > kMaxWeightEntries) throw GuardError("weight table for n=" + std::to_string(n) +
                                                        ", k=" + std::to_string(k) + " is too large");
        levels_.emplace_back(static_cast<std::size_t>(binomial(n, s)), 0.0);
    }
}

std::size_t WeightFunction::level_of(VertexSet h) const {
    const int s = h.size();
    if (s < 1 || s > k_ + 1 || !h.subset_of(VertexSet::range(n_)))
        throw ValidationError("no weight for subset " + h.to_string() + " (n=" + std::to_string(n_) +
                              ", k=" + std::to_string(k_) + ")");
    return static_cast<std::size_t>(s - 1);
}

WeightFunction WeightFunction::scaled(double c) const {
    WeightFunction out = *this;
    for (std::size_t s = 1; s < out.levels_.size(); ++s)
        for (double& w : out.levels_[s]) w *= c;
    return out;
}

EntropyLevels subset_entropies(const MarginalSource& source, int max_size) {
    const int n = source.num_vars();
    EntropyLevels out;
    for (int s = 1; s <= max_size; ++s) {
        const auto sets = subsets_of_size(n, s);
        std::vector<double> level(sets.size());
        const auto count = static_cast<long long>(sets.size());
#pragma omp parallel for schedule(dynamic, 16)
        for (long long i = 0; i < count; ++i) level[i] = source.entropy(sets[i]);
        out.push_back(std::move(level));
    }
    return out;
}

WeightFunction weights_from_entropies(const EntropyLevels& entropies, int n, int k) {
    WeightFunction wf(n, k);
    for (int s = 1; s <= k + 1; ++s) {
        const auto sets = subsets_of_size(n, s);
        const auto& h_level = entropies.at(s - 1);
        auto w_level = wf.level(s);
        const auto count = static_cast<long long>(sets.size());
        // Each slot reads only strictly smaller subsets, all finished earlier.
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < count; ++i) {
            const VertexSet h = sets[i];
            double w = -h_level[i];
            h.for_each_nonempty_subset([&](VertexSet sub) {
                if (sub != h) w -= wf.at(sub);
            });
            w_level[i] = w;
        }
    }
    return wf;
}

WeightFunction compute_weights(const MarginalSource& source, int k) {
    check_width(source.num_vars(), k);
    WeightFunction probe(source.num_vars(), k);  // size guard before the O(T) sweeps
    return weights_from_entropies(subset_entropies(source, k + 1), source.num_vars(), k);
}

double weight_inclusion_exclusion(const MarginalSource& source, VertexSet h) {
    if (h.empty()) throw ValidationError("weight of the empty set is undefined");
    double w = 0.0;
    const int full = h.size();
    h.for_each_nonempty_subset([&](VertexSet sub) {
        const double term = source.entropy(sub);
        w += ((full - sub.size()) % 2 == 0) ? -term : term;
    });
    return w;
}

double monotone_deficit(const WeightFunction& wf, VertexSet h, int v) {
    if (h.size() < 2) throw ValidationError("monotone_deficit needs |h| >= 2");
    if (!h.contains(v)) throw ValidationError("vertex " + std::to_string(v) + " not in " + h.to_string());
    return wf.at(VertexSet::single(v)) + attachment_gain(wf, v, h.without(v));
}

double attachment_gain(const WeightFunction& wf, int v, VertexSet anchor) {
    double gain = 0.0;
    anchor.for_each_nonempty_subset([&](VertexSet s) { gain += wf.at(s.with(v)); });
    return gain;
}

double clique_weight(const WeightFunction& wf, VertexSet clique) {
    double total = 0.0;
    clique.for_each_nonempty_subset([&](VertexSet s) {
        if (s.size() >= 2) total += wf.at(s);
    });
    return total;
}

double min_monotone_gain(const WeightFunction& wf) {
    double worst = std::numeric_limits<double>::infinity();
    for (int s = 2; s <= wf.k() + 1; ++s) {
        for_each_subset_of_size(wf.n(), s, [&](VertexSet h) {
            for (int v : h.members()) worst = std::min(worst, attachment_gain(wf, v, h.without(v)));
        });
    }
    return worst;
}

}  // namespace hypertree
