// Exhaustive k-tree search.
//
// k-trees are generated by reverse search: the parent of a k-tree on more than
// k+1 vertices is obtained by deleting its largest-labelled vertex of degree
// k (always a simplicial leaf). Starting from every (k+1)-clique, a child
// produced by attaching v to a k-clique is kept only when v is that canonical
// leaf of the child. Every labelled k-tree is then reached exactly once, so no
// visited-set is needed.

#include <algorithm>
#include <limits>

#include "hypertree/errors.hpp"
#include "internal.hpp"

namespace hypertree {

namespace {

constexpr int kEdgeMaskVertices = 11;  // C(11,2) = 55 edge bits

struct Leaf {
    bool valid = false;
    double score = 0.0;
    std::uint64_t edge_mask = 0;
    VertexSet seed;
    std::vector<Attachment> attachments;
};

// Equal-size edge sets: the set holding the smallest differing edge is the
// lexicographically smaller sorted edge list.
bool edges_lex_less(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t diff = a ^ b;
    return diff != 0 && (a & (diff & (~diff + 1))) != 0;
}

bool leaf_better(double score, std::uint64_t mask, const Leaf& incumbent) {
    if (!incumbent.valid) return true;
    switch (detail::compare_scores(score, incumbent.score)) {
        case detail::Cmp::Better: return true;
        case detail::Cmp::Worse: return false;
        case detail::Cmp::Tie: return edges_lex_less(mask, incumbent.edge_mask);
    }
    return false;
}

struct KClique {
    VertexSet set;
    std::uint64_t rank;
};

class Enumerator {
public:
    Enumerator(const WeightFunction* wf, int n, int k, bool track_runner_up, double lower_bound)
        : wf_(wf), n_(n), k_(k), track_runner_up_(track_runner_up), lower_bound_(lower_bound) {
        edge_index_.assign(static_cast<std::size_t>(n) * n, 0);
        int idx = 0;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) edge_index_[u * n + v] = edge_index_[v * n + u] = idx++;

        anchors_per_vertex_ = binomial(n, k);
        if (wf_) {
            gain_.assign(static_cast<std::size_t>(n) * anchors_per_vertex_, 0.0);
            max_gain_.assign(n, -std::numeric_limits<double>::infinity());
            for_each_subset_of_size(n, k, [&](VertexSet anchor) {
                const auto r = colex_rank(anchor);
                for (int v = 0; v < n; ++v) {
                    if (anchor.contains(v)) continue;
                    const double g = attachment_gain(*wf_, v, anchor);
                    gain_[v * anchors_per_vertex_ + r] = g;
                    max_gain_[v] = std::max(max_gain_[v], g);
                }
            });
        }
    }

    void run_root(VertexSet root) {
        adj_.assign(n_, 0);
        degree_.assign(n_, k_);
        mask_ = 0;
        for (int u : root.members()) {
            adj_[u] = root.without(u).bits();
            for (int v : root.members())
                if (u < v) mask_ |= std::uint64_t{1} << edge_index_[u * n_ + v];
        }
        kcliques_.clear();
        for (int x : root.members()) {
            const VertexSet s = root.without(x);
            kcliques_.push_back({s, colex_rank(s)});
        }
        attachments_.clear();
        root_ = root;
        const double base = wf_ ? clique_weight(*wf_, root) : 0.0;
        dfs(root, base);
    }

    const Leaf& best() const { return best_; }
    double runner_up() const { return runner_up_; }
    std::uint64_t nodes() const { return nodes_; }
    std::uint64_t leaves() const { return leaves_; }

private:
    void dfs(VertexSet placed, double current) {
        ++nodes_;
        if (placed.size() == n_) {
            visit_leaf(current);
            return;
        }
        if (wf_ && prune(placed, current)) return;

        const std::size_t clique_count = kcliques_.size();
        for (int v = 0; v < n_; ++v) {
            if (placed.contains(v)) continue;
            for (std::size_t ci = 0; ci < clique_count; ++ci) {
                const KClique anchor = kcliques_[ci];
                if (!canonical_child(placed, v, anchor.set)) continue;
                attach(v, anchor.set);
                const double g = wf_ ? gain_[v * anchors_per_vertex_ + anchor.rank] : 0.0;
                dfs(placed.with(v), current + g);
                detach(v, anchor.set);
            }
        }
    }

    bool prune(VertexSet placed, double current) const {
        double bound = current;
        for (int v = 0; v < n_; ++v)
            if (!placed.contains(v)) bound += max_gain_[v];
        double threshold = lower_bound_;
        if (track_runner_up_) {
            threshold = runner_up_;
        } else if (best_.valid) {
            threshold = std::max(threshold, best_.score);
        }
        return bound < threshold - 1e-9;
    }

    // v must be the largest vertex of degree k once attached to `anchor`.
    bool canonical_child(VertexSet placed, int v, VertexSet anchor) const {
        for (int u = n_ - 1; u > v; --u)
            if (placed.contains(u) && degree_[u] == k_ && !anchor.contains(u)) return false;
        return true;
    }

    void attach(int v, VertexSet anchor) {
        adj_[v] = anchor.bits();
        degree_[v] = k_;
        for (int u : anchor.members()) {
            adj_[u] |= std::uint64_t{1} << v;
            ++degree_[u];
            mask_ |= std::uint64_t{1} << edge_index_[u * n_ + v];
        }
        for (int x : anchor.members()) {
            const VertexSet s = anchor.without(x).with(v);
            kcliques_.push_back({s, colex_rank(s)});
        }
        attachments_.push_back({v, anchor});
    }

    void detach(int v, VertexSet anchor) {
        adj_[v] = 0;
        for (int u : anchor.members()) {
            adj_[u] &= ~(std::uint64_t{1} << v);
            --degree_[u];
            mask_ &= ~(std::uint64_t{1} << edge_index_[u * n_ + v]);
        }
        kcliques_.resize(kcliques_.size() - static_cast<std::size_t>(k_));
        attachments_.pop_back();
    }

    void visit_leaf(double current) {
        ++leaves_;
        if (!wf_) return;
        if (leaf_better(current, mask_, best_)) {
            if (best_.valid) runner_up_ = std::max(runner_up_, best_.score);
            best_ = Leaf{true, current, mask_, root_, attachments_};
        } else {
            runner_up_ = std::max(runner_up_, current);
        }
    }

    const WeightFunction* wf_;
    int n_;
    int k_;
    bool track_runner_up_;
    double lower_bound_;

    std::vector<int> edge_index_;
    std::uint64_t anchors_per_vertex_ = 0;
    std::vector<double> gain_;
    std::vector<double> max_gain_;

    Adjacency adj_;
    std::vector<int> degree_;
    std::uint64_t mask_ = 0;
    std::vector<KClique> kcliques_;
    std::vector<Attachment> attachments_;
    VertexSet root_;

    Leaf best_;
    double runner_up_ = -std::numeric_limits<double>::infinity();
    std::uint64_t nodes_ = 0;
    std::uint64_t leaves_ = 0;
};

}  // namespace

int default_exact_limit(int k) { return k <= 2 ? 9 : 8; }

std::uint64_t count_ktrees(int n, int k) {
    if (n < 1 || n > kEdgeMaskVertices || k < 1) throw ValidationError("count_ktrees: n outside [1, 11]");
    if (n <= k + 1) return 1;
    Enumerator e(nullptr, n, k, false, 0.0);
    for (VertexSet root : subsets_of_size(n, k + 1)) e.run_root(root);
    return e.leaves();
}

SolverResult exact_search(const WeightFunction& wf, const ExactOptions& options) {
    detail::Stopwatch clock;
    const int n = wf.n();
    const int k = wf.k();
    if (k < 1) throw ValidationError("exact_search needs k >= 1");
    const int limit = options.max_vertices > 0 ? options.max_vertices : default_exact_limit(k);
    if (n > limit)
        throw GuardError("exact search refused: n=" + std::to_string(n) + " exceeds the limit of " +
                         std::to_string(limit) + " for k=" + std::to_string(k));
    if (n > kEdgeMaskVertices)
        throw GuardError("exact search supports at most " + std::to_string(kEdgeMaskVertices) + " vertices");

    SolverStats stats;
    if (n <= k + 1) {
        KTree tree = KTree::full_clique(n, k);
        stats.nodes = 1;
        stats.elapsed_ms = clock.elapsed_ms();
        return {tree, score(tree, wf), SolverMethod::Exact, stats};
    }

    // Greedy gives a valid incumbent; the optimum can never fall below it.
    const double lower_bound = options.track_runner_up ? -std::numeric_limits<double>::infinity()
                                                       : greedy(wf).score;

    const auto roots = subsets_of_size(n, k + 1);
    std::vector<Leaf> best(roots.size());
    std::vector<double> runner_up(roots.size());
    std::vector<std::uint64_t> nodes(roots.size());
    const auto root_count = static_cast<long long>(roots.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < root_count; ++i) {
        Enumerator e(&wf, n, k, options.track_runner_up, lower_bound);
        e.run_root(roots[i]);
        best[i] = e.best();
        runner_up[i] = e.runner_up();
        nodes[i] = e.nodes();
    }

    // Reduce in root order.
    Leaf overall;
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < roots.size(); ++i) {
        stats.nodes += nodes[i];
        second = std::max(second, runner_up[i]);
        if (!best[i].valid) continue;
        if (leaf_better(best[i].score, best[i].edge_mask, overall)) {
            if (overall.valid) second = std::max(second, overall.score);
            overall = std::move(best[i]);
        } else {
            second = std::max(second, best[i].score);
        }
    }
    if (!overall.valid) throw InternalError("exact search found no k-tree");

    KTree tree(n, k, overall.seed, std::move(overall.attachments));
    SolverResult result{tree, score(tree, wf), SolverMethod::Exact, stats};
    result.stats.iterations = 0;
    if (options.track_runner_up) result.stats.runner_up_score = second;
    result.stats.elapsed_ms = clock.elapsed_ms();
    return result;
}

}  // namespace hypertree
