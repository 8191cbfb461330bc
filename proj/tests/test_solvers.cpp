#include <doctest.h>

#include <cmath>

#include "hypertree/errors.hpp"
#include "hypertree/solvers.hpp"
#include "test_support.hpp"

using namespace hypertree;

namespace {

double ktree_count_formula(int n, int k) {
    return static_cast<double>(binomial(n, k)) * std::pow(k * (n - k) + 1.0, n - k - 2);
}

}  // namespace

TEST_CASE("k-tree counts") {
    for (int k = 1; k <= 3; ++k)
        for (int n = k + 2; n <= 8; ++n) CHECK(static_cast<double>(count_ktrees(n, k)) == ktree_count_formula(n, k));
    for (auto [n, k] : {std::pair{5, 1}, {5, 2}, {6, 2}, {6, 3}}) {
        const auto brute = oracle::brute_force_ktrees(n, k, [](const std::vector<int>&) { return 0.0; });
        CHECK(brute.count == count_ktrees(n, k));
    }
}

TEST_CASE("two triangles on a shared edge") {
    WeightFunction wf(4, 2);
    wf.set(VertexSet(0b0111), 1.0);
    wf.set(VertexSet(0b1011), 1.0);
    const SolverResult r = exact_search(wf);
    CHECK(r.score == doctest::Approx(2.0));
    const auto cliques = r.tree.maximal_cliques();
    CHECK(std::find(cliques.begin(), cliques.end(), VertexSet(0b0111)) != cliques.end());
    CHECK(std::find(cliques.begin(), cliques.end(), VertexSet(0b1011)) != cliques.end());
}

TEST_CASE("exact search matches brute force") {
    oracle::Rng rng(101);
    for (int trial = 0; trial < 24; ++trial) {
        const int k = 1 + trial % 3;
        const int n = k + 2 + static_cast<int>(rng() % (k == 3 ? 3 : 5 - k));
        const WeightFunction wf = oracle::random_weights(rng, n, k, -1.0, 1.0);
        const auto brute = oracle::brute_force_ktrees(n, k, oracle::lookup(wf));
        ExactOptions options;
        options.track_runner_up = true;
        const SolverResult r = exact_search(wf, options);
        CHECK(std::abs(r.score - brute.best) <= 1e-12);
        CHECK(r.tree.edges() == brute.best_edges);
        REQUIRE(r.stats.runner_up_score.has_value());
        CHECK(std::abs(*r.stats.runner_up_score - brute.runner_up) <= 1e-12);
        CHECK(std::abs(score(r.tree, wf) - r.score) <= 1e-15);

        const SolverResult pruned = exact_search(wf);
        CHECK(pruned.tree == r.tree);
        CHECK(pruned.stats.nodes <= r.stats.nodes);
    }
}

TEST_CASE("exact search on seven vertices against brute force") {
    oracle::Rng rng(5);
    const WeightFunction wf = oracle::random_weights(rng, 7, 2, -0.5, 1.0);
    const auto brute = oracle::brute_force_ktrees(7, 2, oracle::lookup(wf));
    const SolverResult r = exact_search(wf);
    CHECK(std::abs(r.score - brute.best) <= 1e-12);
    CHECK(r.tree.edges() == brute.best_edges);
}

TEST_CASE("Chow-Liu equals exact at width one") {
    oracle::Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 6);
        const Dataset d = oracle::to_dataset(oracle::random_raw(rng, n, 120, {2, 3}));
        const WeightFunction wf = compute_weights(d, 1);
        const SolverResult cl = chow_liu(wf);
        const SolverResult ex = exact_search(wf);
        CHECK(std::abs(cl.score - ex.score) <= 1e-12);
        CHECK(cl.method == SolverMethod::ChowLiu);
        CHECK(verify_width(n, cl.tree.edges(), 1).ok);
    }
    CHECK_THROWS_AS(chow_liu(WeightFunction(4, 2)), ValidationError);
}

TEST_CASE("Chow-Liu recovers a chain") {
    const auto raw = oracle::binary_chain(5, 0.1);
    const WeightFunction wf = compute_weights(oracle::to_joint(raw), 1);
    const SolverResult r = chow_liu(wf);
    const std::vector<Edge> path{{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    CHECK(r.tree.edges() == path);
    CHECK(exact_search(wf).tree.edges() == path);
}

TEST_CASE("heuristics are bounded by the optimum") {
    oracle::Rng rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);
        const WeightFunction wf = oracle::random_weights(rng, n, 2, 0.0, 1.0);
        const SolverResult ex = exact_search(wf);
        const SolverResult gr = greedy(wf);
        const SolverResult ls = local_search(wf, gr.tree);
        CHECK(std::abs(score(gr.tree, wf) - gr.score) <= 1e-12);
        CHECK(std::abs(score(ls.tree, wf) - ls.score) <= 1e-12);
        CHECK(ex.score >= ls.score - 1e-9);
        CHECK(ls.score >= gr.score - 1e-12);
        CHECK(verify_width(n, ls.tree.edges(), 2).ok);
        CHECK(ls.tree.num_edges() == gr.tree.num_edges());
    }
}

TEST_CASE("local search escapes a poor start") {
    oracle::Rng rng(3);
    int improved = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const WeightFunction wf = oracle::random_weights(rng, 7, 2, 0.0, 1.0);
        const KTree start = oracle::random_ktree(rng, 7, 2);
        const SolverResult ls = local_search(wf, start);
        CHECK(ls.score >= score(start, wf));
        if (ls.score > score(start, wf) + 1e-9) ++improved;
        CHECK(ls.stats.iterations <= 1000);
        const SolverResult frozen = local_search(wf, start, {0});
        CHECK(frozen.tree == start);
    }
    CHECK(improved > 10);
}

TEST_CASE("degenerate and guarded inputs") {
    WeightFunction wf(3, 2);
    wf.set(VertexSet(0b011), 0.3);
    for (const SolverResult& r : {exact_search(wf), greedy(wf), local_search(wf, KTree::full_clique(3, 2))}) {
        CHECK(r.tree == KTree::full_clique(3, 2));
        CHECK(r.score == doctest::Approx(0.3));
    }
    CHECK_THROWS_AS(exact_search(WeightFunction(12, 2)), GuardError);
    CHECK_THROWS_AS(exact_search(WeightFunction(9, 3)), GuardError);
    ExactOptions big;
    big.max_vertices = 20;
    CHECK_THROWS_AS(exact_search(WeightFunction(12, 2), big), GuardError);
    CHECK(default_exact_limit(2) == 9);
    CHECK(default_exact_limit(3) == 8);
}

TEST_CASE("results are deterministic") {
    oracle::Rng rng(1);
    const WeightFunction wf = oracle::random_weights(rng, 8, 2, 0.0, 1.0);
    CHECK(exact_search(wf).tree == exact_search(wf).tree);
    CHECK(greedy(wf).tree == greedy(wf).tree);
    // Equal weights everywhere: every k-tree ties, the choice must still be stable.
    WeightFunction flat(6, 2);
    for (int s = 2; s <= 3; ++s)
        for (auto& w : flat.level(s)) w = 0.25;
    CHECK(exact_search(flat).tree == exact_search(flat).tree);
    CHECK(solver_method_from_string("local") == SolverMethod::LocalSearch);
    CHECK(to_string(SolverMethod::ChowLiu) == "chow_liu");
    CHECK_THROWS_AS(solver_method_from_string("annealing"), ValidationError);
}
