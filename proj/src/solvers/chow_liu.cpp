#include <algorithm>
#include <numeric>

#include "hypertree/errors.hpp"
#include "internal.hpp"

namespace hypertree {

std::string to_string(SolverMethod m) {
    switch (m) {
        case SolverMethod::ChowLiu: return "chow_liu";
        case SolverMethod::Exact: return "exact";
        case SolverMethod::Greedy: return "greedy";
        case SolverMethod::LocalSearch: return "local_search";
    }
    return "unknown";
}

SolverMethod solver_method_from_string(const std::string& name) {
    if (name == "chow_liu") return SolverMethod::ChowLiu;
    if (name == "exact") return SolverMethod::Exact;
    if (name == "greedy") return SolverMethod::Greedy;
    if (name == "local" || name == "local_search") return SolverMethod::LocalSearch;
    throw ValidationError("unknown solver '" + name + "' (expected chow_liu, exact, greedy or local)");
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[std::max(a, b)] = std::min(a, b);
        return true;
    }

private:
    std::vector<int> parent_;
};

}  // namespace

SolverResult chow_liu(const WeightFunction& wf) {
    if (wf.k() != 1) throw ValidationError("chow_liu needs k=1, got k=" + std::to_string(wf.k()));
    detail::Stopwatch clock;
    const int n = wf.n();

    struct Candidate {
        Edge edge;
        double w;
    };
    std::vector<Candidate> candidates;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) candidates.push_back({{u, v}, wf.at(VertexSet{u, v})});
    // Equal weights stay in lexicographic edge order.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.w > b.w; });

    DisjointSets forest(n);
    std::vector<Edge> tree_edges;
    for (const auto& c : candidates) {
        if (forest.unite(c.edge.first, c.edge.second)) tree_edges.push_back(c.edge);
        if (static_cast<int>(tree_edges.size()) == n - 1) break;
    }
    std::sort(tree_edges.begin(), tree_edges.end());

    KTree tree = ktree_from_graph(n, tree_edges, 1);
    SolverResult result{tree, score(tree, wf), SolverMethod::ChowLiu, {}};
    result.stats.nodes = candidates.size();
    result.stats.iterations = tree_edges.size();
    result.stats.elapsed_ms = clock.elapsed_ms();
    return result;
}

}  // namespace hypertree
