#include "hypertree/structure.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "hypertree/errors.hpp"

namespace hypertree {

namespace {

std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

// Maximum-cardinality search visit order; ties go to the smallest vertex.
// Reversed, it is a perfect elimination ordering iff the graph is chordal.
std::vector<int> mcs_order(const Adjacency& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> weight(n, 0);
    std::vector<int> order;
    order.reserve(n);
    std::uint64_t visited = 0;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v)
            if (!(visited & bit(v)) && (best < 0 || weight[v] > weight[best])) best = v;
        order.push_back(best);
        visited |= bit(best);
        for (std::uint64_t nb = adj[best] & ~visited; nb; nb &= nb - 1) ++weight[std::countr_zero(nb)];
    }
    return order;
}

bool is_clique(const Adjacency& adj, VertexSet s) {
    for (int u : s.members())
        if (!(s.without(u)).subset_of(VertexSet(adj[u]))) return false;
    return true;
}

// Shortest u-w path avoiding the closed neighbourhood of v (except u and w).
std::vector<int> chordless_cycle(const Adjacency& adj, int v, int u, int w) {
    const int n = static_cast<int>(adj.size());
    const std::uint64_t banned = (adj[v] | bit(v)) & ~(bit(u) | bit(w));
    std::vector<int> parent(n, -1);
    std::deque<int> queue{u};
    parent[u] = u;
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        if (x == w) break;
        for (std::uint64_t nb = adj[x] & ~banned; nb; nb &= nb - 1) {
            const int y = std::countr_zero(nb);
            if (parent[y] < 0) {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    if (parent[w] < 0) return {};
    std::vector<int> cycle{v};
    for (int x = w; x != u; x = parent[x]) cycle.push_back(x);
    cycle.push_back(u);
    return cycle;
}

}  // namespace

// ---------------------------------------------------------------------------
// KTree

KTree::KTree(int n, int k, VertexSet seed, std::vector<Attachment> attachments)
    : n_(n), k_(k), seed_(seed), attachments_(std::move(attachments)) {
    if (n < 1 || n > kMaxVertices) throw ValidationError("k-tree vertex count outside [1, 64]");
    if (k < 1) throw ValidationError("k-tree width must be >= 1");
    const VertexSet all = VertexSet::range(n);
    if (!seed.subset_of(all)) throw ValidationError("seed has a vertex outside [0, n)");
    const int seed_size = std::min(k + 1, n);
    if (seed.size() != seed_size)
        throw ValidationError("seed " + seed.to_string() + " must have " + std::to_string(seed_size) +
                              " vertices");

    std::vector<VertexSet> cliques{seed};
    VertexSet placed = seed;
    for (const auto& a : attachments_) {
        if (a.vertex < 0 || a.vertex >= n) throw ValidationError("attached vertex outside [0, n)");
        if (placed.contains(a.vertex))
            throw ValidationError("vertex " + std::to_string(a.vertex) + " appears twice");
        if (a.anchor.size() != k)
            throw ValidationError("anchor " + a.anchor.to_string() + " must have " + std::to_string(k) +
                                  " vertices");
        const bool inside = std::any_of(cliques.begin(), cliques.end(),
                                        [&](VertexSet c) { return a.anchor.subset_of(c); });
        if (!inside)
            throw ValidationError("anchor " + a.anchor.to_string() + " of vertex " + std::to_string(a.vertex) +
                                  " is not inside an existing clique");
        cliques.push_back(a.anchor.with(a.vertex));
        placed = placed.with(a.vertex);
    }
    if (placed != all) throw ValidationError("k-tree does not span all " + std::to_string(n) + " vertices");
}

KTree KTree::full_clique(int n, int k) {
    if (n > k + 1) throw ValidationError("full clique needs n <= k+1");
    return KTree(n, k, VertexSet::range(n), {});
}

std::vector<VertexSet> KTree::maximal_cliques() const {
    std::vector<VertexSet> out{seed_};
    for (const auto& a : attachments_) out.push_back(a.anchor.with(a.vertex));
    return out;
}

Adjacency KTree::adjacency() const {
    Adjacency adj(n_, 0);
    for (VertexSet c : maximal_cliques())
        for (int v : c.members()) adj[v] |= c.without(v).bits();
    return adj;
}

std::vector<Edge> KTree::edges() const { return edges_from_adjacency(adjacency()); }

std::uint64_t KTree::num_edges() const {
    const std::uint64_t s = seed_.size();
    return s * (s - 1) / 2 + attachments_.size() * static_cast<std::uint64_t>(k_);
}

// ---------------------------------------------------------------------------
// Cliques and scoring

CliqueSet cliques_of(const KTree& tree) {
    std::set<std::uint64_t> seen;
    CliqueSet out;
    for (VertexSet c : tree.maximal_cliques()) {
        c.for_each_nonempty_subset([&](VertexSet s) {
            if (s.size() >= 2 && seen.insert(s.bits()).second) out.push_back(s);
        });
    }
    std::sort(out.begin(), out.end(), [](VertexSet a, VertexSet b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return VertexSet::lex_less(a, b);
    });
    return out;
}

namespace {

void check_coverage(const KTree& tree, const WeightFunction& wf) {
    if (wf.n() != tree.n())
        throw ValidationError("weight function has n=" + std::to_string(wf.n()) + " but structure has n=" +
                              std::to_string(tree.n()));
    if (wf.k() + 1 < tree.seed().size())
        throw ValidationError("weight function (k=" + std::to_string(wf.k()) +
                              ") is missing entries for cliques of size " + std::to_string(tree.seed().size()));
}

}  // namespace

double score(const KTree& tree, const WeightFunction& wf) {
    check_coverage(tree, wf);
    double total = 0.0;
    for (VertexSet h : cliques_of(tree)) total += wf.at(h);
    return total;
}

double score_by_construction(const KTree& tree, const WeightFunction& wf) {
    check_coverage(tree, wf);
    double total = clique_weight(wf, tree.seed());
    for (const auto& a : tree.attachments()) total += attachment_gain(wf, a.vertex, a.anchor);
    return total;
}

// ---------------------------------------------------------------------------
// Graphs

Adjacency adjacency_from_edges(int n, const std::vector<Edge>& edges) {
    if (n < 1 || n > kMaxVertices) throw ValidationError("vertex count outside [1, 64]");
    Adjacency adj(n, 0);
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ValidationError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") outside [0, n)");
        if (u == v) throw ValidationError("self-loop on vertex " + std::to_string(u));
        if (adj[u] & bit(v))
            throw ValidationError("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        adj[u] |= bit(v);
        adj[v] |= bit(u);
    }
    return adj;
}

std::vector<Edge> edges_from_adjacency(const Adjacency& adj) {
    std::vector<Edge> out;
    for (int u = 0; u < static_cast<int>(adj.size()); ++u)
        for (std::uint64_t nb = adj[u] & ~((bit(u) << 1) - 1); nb; nb &= nb - 1)
            out.emplace_back(u, std::countr_zero(nb));
    return out;
}

WidthCertificate verify_width(int n, const std::vector<Edge>& edges, int k) {
    if (k < 1) throw ValidationError("width must be >= 1");
    const Adjacency adj = adjacency_from_edges(n, edges);
    const std::vector<int> visit = mcs_order(adj);

    WidthCertificate cert;
    cert.elimination_order.assign(visit.rbegin(), visit.rend());

    std::uint64_t earlier = 0;
    int widest = -1;
    VertexSet widest_clique;
    for (int v : visit) {
        const VertexSet back(adj[v] & earlier);
        if (!is_clique(adj, back)) {
            // Find a non-adjacent pair among the earlier neighbours.
            for (int u : back.members()) {
                const VertexSet missing = back.without(u) - VertexSet(adj[u]);
                if (missing.empty()) continue;
                const int w = missing.min();
                cert.witness = chordless_cycle(adj, v, u, w);
                if (cert.witness.empty()) {
                    cert.witness = {u, v, w};
                    cert.reason = "not chordal: neighbours " + std::to_string(u) + " and " + std::to_string(w) +
                                  " of " + std::to_string(v) + " are not adjacent";
                } else {
                    cert.reason = "not chordal: chordless cycle of length " + std::to_string(cert.witness.size());
                }
                return cert;
            }
        }
        if (back.size() > widest) {
            widest = back.size();
            widest_clique = back.with(v);
        }
        earlier |= bit(v);
    }
    if (widest + 1 > k + 1) {
        cert.witness = widest_clique.members();
        cert.reason = "clique of size " + std::to_string(widest + 1) + " exceeds k+1=" + std::to_string(k + 1);
        return cert;
    }
    cert.ok = true;
    return cert;
}

KTree ktree_from_graph(int n, const std::vector<Edge>& edges, int k) {
    const WidthCertificate cert = verify_width(n, edges, k);
    if (!cert.ok) throw ValidationError("graph does not have width <= " + std::to_string(k) + ": " + cert.reason);
    if (n <= k + 1) return KTree::full_clique(n, k);

    const Adjacency adj = adjacency_from_edges(n, edges);
    const std::vector<int> visit(cert.elimination_order.rbegin(), cert.elimination_order.rend());

    VertexSet seed;
    for (int i = 0; i <= k; ++i) seed = seed.with(visit[i]);
    std::vector<VertexSet> cliques{seed};
    std::vector<Attachment> attachments;
    VertexSet placed = seed;

    for (std::size_t i = static_cast<std::size_t>(k) + 1; i < visit.size(); ++i) {
        const int v = visit[i];
        const VertexSet required(adj[v] & placed.bits());
        bool found = false;
        VertexSet best;
        for (VertexSet c : cliques) {
            if (!required.subset_of(c)) continue;
            // Drop one vertex outside `required` to get a k-subset.
            for (int drop : (c - required).members()) {
                const VertexSet anchor = c.without(drop);
                if (!found || VertexSet::lex_less(anchor, best)) {
                    best = anchor;
                    found = true;
                }
            }
        }
        if (!found) throw InternalError("no clique contains the earlier neighbours of vertex " + std::to_string(v));
        attachments.push_back({v, best});
        cliques.push_back(best.with(v));
        placed = placed.with(v);
    }
    return KTree(n, k, seed, std::move(attachments));
}

double chordal_score(const Adjacency& adj, const WeightFunction& wf) {
    const std::vector<int> visit = mcs_order(adj);
    std::uint64_t earlier = 0;
    double total = 0.0;
    for (int v : visit) {
        const VertexSet back(adj[v] & earlier);
        if (back.size() > wf.k() || !is_clique(adj, back))
            throw ValidationError("graph is not chordal with cliques of at most k+1 vertices");
        total += attachment_gain(wf, v, back);
        earlier |= bit(v);
    }
    return total;
}

}  // namespace hypertree
