#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hypertree/structure.hpp"
#include "hypertree/weights.hpp"

namespace hypertree {

enum class SolverMethod { ChowLiu, Exact, Greedy, LocalSearch };

std::string to_string(SolverMethod m);
SolverMethod solver_method_from_string(const std::string& name);

struct SolverStats {
    std::uint64_t nodes = 0;       // search nodes (exact) or candidates scored
    std::uint64_t iterations = 0;  // accepted moves / attachments
    double elapsed_ms = 0.0;
    // Best score among structures other than the returned one (exact only,
    // when requested).
    std::optional<double> runner_up_score;
};

struct SolverResult {
    KTree tree;
    double score = 0.0;  // always score(tree, wf)
    SolverMethod method = SolverMethod::Greedy;
    SolverStats stats;
};

// Maximum-weight spanning tree over pair weights (Kruskal). Ties go to the
// lexicographically smallest edge. Requires wf.k() == 1.
SolverResult chow_liu(const WeightFunction& wf);

struct ExactOptions {
    // Largest n accepted; <= 0 selects default_exact_limit(k).
    int max_vertices = 0;
    // Also report the best score among all other k-trees. Disables pruning
    // against the greedy incumbent.
    bool track_runner_up = false;
};

// 9 for k <= 2, 8 otherwise.
int default_exact_limit(int k);

// Exhaustive search over all k-trees on wf.n() vertices. Every k-tree is
// generated exactly once (canonical construction), with branch-and-bound
// pruning. Ties go to the lexicographically smallest edge set. Throws
// GuardError when n exceeds the limit.
SolverResult exact_search(const WeightFunction& wf, const ExactOptions& options = {});

// Number of k-trees visited by an unpruned exact enumeration; test hook.
std::uint64_t count_ktrees(int n, int k);

// Best-seed-then-best-attachment construction.
SolverResult greedy(const WeightFunction& wf);

struct LocalSearchOptions {
    int max_iters = 1000;
};

// Steepest-ascent hill climbing from `start` over two moves on leaf vertices
// (degree exactly k): re-anchoring the leaf to another k-clique, and swapping
// the leaf's label with any other vertex. Only moves improving the score by
// more than 1e-12 are taken.
SolverResult local_search(const WeightFunction& wf, const KTree& start, const LocalSearchOptions& options = {});

}  // namespace hypertree
