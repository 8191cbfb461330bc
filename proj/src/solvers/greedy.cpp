#include <vector>

#include "internal.hpp"

namespace hypertree {

namespace {

struct Choice {
    bool valid = false;
    int vertex = -1;
    VertexSet anchor;
    double gain = 0.0;
};

// Better gain first, then smaller vertex, then lexicographically smaller anchor.
bool preferred(const Choice& a, const Choice& b) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    switch (detail::compare_scores(a.gain, b.gain)) {
        case detail::Cmp::Better: return true;
        case detail::Cmp::Worse: return false;
        case detail::Cmp::Tie: break;
    }
    if (a.vertex != b.vertex) return a.vertex < b.vertex;
    return VertexSet::lex_less(a.anchor, b.anchor);
}

}  // namespace

SolverResult greedy(const WeightFunction& wf) {
    detail::Stopwatch clock;
    const int n = wf.n();
    const int k = wf.k();
    SolverStats stats;

    if (n <= k + 1) {
        KTree tree = KTree::full_clique(n, std::max(k, 1));
        return {tree, score(tree, wf), SolverMethod::Greedy, stats};
    }

    VertexSet seed;
    double seed_weight = 0.0;
    bool have_seed = false;
    for_each_subset_of_size(n, k + 1, [&](VertexSet s) {
        ++stats.nodes;
        const double w = clique_weight(wf, s);
        const auto cmp = detail::compare_scores(w, seed_weight);
        if (!have_seed || cmp == detail::Cmp::Better ||
            (cmp == detail::Cmp::Tie && VertexSet::lex_less(s, seed))) {
            seed = s;
            seed_weight = w;
            have_seed = true;
        }
    });

    // k-cliques of the partial k-tree; each attachment adds k new ones.
    std::vector<VertexSet> kcliques;
    for (int x : seed.members()) kcliques.push_back(seed.without(x));

    VertexSet placed = seed;
    std::vector<Attachment> attachments;
    while (placed.size() < n) {
        std::vector<Choice> per_vertex(n);
        const auto cliques = static_cast<long long>(kcliques.size());
#pragma omp parallel for schedule(dynamic)
        for (int v = 0; v < n; ++v) {
            if (placed.contains(v)) continue;
            Choice best;
            for (long long i = 0; i < cliques; ++i) {
                Choice c{true, v, kcliques[i], attachment_gain(wf, v, kcliques[i])};
                if (preferred(c, best)) best = c;
            }
            per_vertex[v] = best;
        }
        Choice best;
        for (const auto& c : per_vertex)
            if (preferred(c, best)) best = c;
        stats.nodes += static_cast<std::uint64_t>(n - placed.size()) * kcliques.size();

        attachments.push_back({best.vertex, best.anchor});
        for (int x : best.anchor.members()) kcliques.push_back(best.anchor.without(x).with(best.vertex));
        placed = placed.with(best.vertex);
        ++stats.iterations;
    }

    KTree tree(n, k, seed, std::move(attachments));
    const double total = score(tree, wf);
    stats.elapsed_ms = clock.elapsed_ms();
    return {std::move(tree), total, SolverMethod::Greedy, stats};
}

}  // namespace hypertree
