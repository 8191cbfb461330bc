#include <algorithm>
#include <utility>

#include "hypertree/errors.hpp"
#include "internal.hpp"

namespace hypertree {

namespace {

std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

// k-cliques of a k-tree restricted to `active` vertices: every clique has a
// unique smallest member x, and its other members are neighbours above x.
std::vector<VertexSet> kcliques(const Adjacency& adj, VertexSet active, int k) {
    std::vector<VertexSet> out;
    for (int x : active.members()) {
        const VertexSet later = (VertexSet(adj[x]) & active) - VertexSet((bit(x) << 1) - 1);
        if (later.size() < k - 1) continue;
        for_each_subset_of_size(later.size(), k - 1, [&](VertexSet pick) {
            const auto members = later.members();
            VertexSet s = VertexSet::single(x);
            for (int i : pick.members()) s = s.with(members[i]);
            for (int u : s.without(x).members())
                if ((s.without(u) - VertexSet(adj[u])).size() != 0) return;
            out.push_back(s);
        });
    }
    std::sort(out.begin(), out.end(), VertexSet::lex_less);
    return out;
}

Adjacency swap_labels(const Adjacency& adj, int a, int b) {
    auto relabel = [&](std::uint64_t mask) {
        const bool has_a = mask & bit(a), has_b = mask & bit(b);
        mask &= ~(bit(a) | bit(b));
        if (has_a) mask |= bit(b);
        if (has_b) mask |= bit(a);
        return mask;
    };
    Adjacency out(adj.size());
    for (std::size_t v = 0; v < adj.size(); ++v) out[v] = relabel(adj[v]);
    std::swap(out[a], out[b]);
    return out;
}

struct Move {
    enum class Kind { None, Reanchor, Swap } kind = Kind::None;
    int vertex = -1;
    int other = -1;
    VertexSet anchor;
    double delta = 0.0;
};

}  // namespace

SolverResult local_search(const WeightFunction& wf, const KTree& start, const LocalSearchOptions& options) {
    detail::Stopwatch clock;
    const int n = wf.n();
    const int k = wf.k();
    if (start.n() != n || start.k() != k)
        throw ValidationError("local_search start structure does not match the weight function's n and k");

    SolverStats stats;
    Adjacency adj = start.adjacency();
    double current = chordal_score(adj, wf);
    const VertexSet all = VertexSet::range(n);

    while (n > k + 1 && stats.iterations < static_cast<std::uint64_t>(std::max(0, options.max_iters))) {
        Move best;
        best.delta = detail::kTieTolerance;

        for (int v = 0; v < n; ++v) {
            if (std::popcount(adj[v]) != k) continue;
            const VertexSet anchor(adj[v]);
            const double here = attachment_gain(wf, v, anchor);

            // Re-anchor the leaf: remove it and rejoin it to another k-clique.
            Adjacency rest = adj;
            rest[v] = 0;
            for (int u : anchor.members()) rest[u] &= ~bit(v);
            for (VertexSet target : kcliques(rest, all.without(v), k)) {
                if (target == anchor) continue;
                ++stats.nodes;
                const double delta = attachment_gain(wf, v, target) - here;
                if (delta > best.delta) best = {Move::Kind::Reanchor, v, -1, target, delta};
            }

            // Swap the leaf's label with another vertex.
            for (int u = 0; u < n; ++u) {
                if (u == v) continue;
                ++stats.nodes;
                const double delta = chordal_score(swap_labels(adj, v, u), wf) - current;
                if (delta > best.delta) best = {Move::Kind::Swap, v, u, {}, delta};
            }
        }
        if (best.kind == Move::Kind::None) break;

        if (best.kind == Move::Kind::Reanchor) {
            for (int u : VertexSet(adj[best.vertex]).members()) adj[u] &= ~bit(best.vertex);
            adj[best.vertex] = best.anchor.bits();
            for (int u : best.anchor.members()) adj[u] |= bit(best.vertex);
        } else {
            adj = swap_labels(adj, best.vertex, best.other);
        }
        current = chordal_score(adj, wf);
        ++stats.iterations;
    }

    KTree tree = stats.iterations == 0 ? start : ktree_from_graph(n, edges_from_adjacency(adj), k);
    const double total = score(tree, wf);
    stats.elapsed_ms = clock.elapsed_ms();
    return {std::move(tree), total, SolverMethod::LocalSearch, stats};
}

}  // namespace hypertree
