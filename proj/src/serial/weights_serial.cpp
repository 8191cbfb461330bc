// Serial reference kernels. Tests check the OpenMP versions against these.

#include <map>

#include "hypertree/errors.hpp"
#include "hypertree/weights.hpp"

namespace hypertree::serial {

namespace {

// Ordered by size, then colex order of the bitmask.
struct SizeColexLess {
    bool operator()(VertexSet a, VertexSet b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.bits() < b.bits();
    }
};

using EntropyMap = std::map<VertexSet, double, SizeColexLess>;

EntropyMap entropy_map(const MarginalSource& source, int max_size) {
    EntropyMap out;
    const int n = source.num_vars();
    for (int s = 1; s <= max_size; ++s)
        for_each_subset_of_size(n, s, [&](VertexSet h) { out.emplace(h, source.entropy(h)); });
    return out;
}

}  // namespace

EntropyLevels subset_entropies(const MarginalSource& source, int max_size) {
    EntropyLevels out(static_cast<std::size_t>(max_size));
    for (const auto& [h, value] : entropy_map(source, max_size)) out[h.size() - 1].push_back(value);
    return out;
}

WeightFunction compute_weights(const MarginalSource& source, int k) {
    const int n = source.num_vars();
    if (k < 1 || k > n - 1) throw ValidationError("width k outside [1, n-1]");
    const EntropyMap entropies = entropy_map(source, k + 1);

    std::map<VertexSet, double, SizeColexLess> w;
    for (const auto& [h, value] : entropies) {
        double acc = -value;
        h.for_each_nonempty_subset([&](VertexSet sub) {
            if (sub != h) acc -= w.at(sub);
        });
        w.emplace(h, acc);
    }

    WeightFunction out(n, k);
    for (const auto& [h, value] : w) out.set(h, value);
    return out;
}

}  // namespace hypertree::serial
