#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hypertree/errors.hpp"
#include "hypertree/structure.hpp"
#include "test_support.hpp"

using namespace hypertree;

namespace {

std::vector<std::vector<int>> as_lists(const CliqueSet& cs) {
    std::vector<std::vector<int>> out;
    for (VertexSet c : cs) out.push_back(c.members());
    std::sort(out.begin(), out.end());
    return out;
}

bool is_peo(int n, const std::vector<Edge>& edges, const std::vector<int>& order) {
    const auto adj = oracle::matrix_of(n, edges);
    if (static_cast<int>(order.size()) != n) return false;
    for (int i = 0; i < n; ++i) {
        std::vector<int> later;
        for (int j = i + 1; j < n; ++j)
            if (adj[order[i]][order[j]]) later.push_back(order[j]);
        for (std::size_t a = 0; a < later.size(); ++a)
            for (std::size_t b = a + 1; b < later.size(); ++b)
                if (!adj[later[a]][later[b]]) return false;
    }
    return true;
}

bool is_chordless_cycle(int n, const std::vector<Edge>& edges, const std::vector<int>& cycle) {
    const auto adj = oracle::matrix_of(n, edges);
    const int m = static_cast<int>(cycle.size());
    if (m < 4) return false;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const bool consecutive = j == i + 1 || (i == 0 && j == m - 1);
            if (adj[cycle[i]][cycle[j]] != consecutive) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("two triangles sharing an edge") {
    const KTree t(4, 2, VertexSet(0b0111), {{3, VertexSet(0b0110)}});
    const auto cs = as_lists(cliques_of(t));
    const std::vector<std::vector<int>> expected{{0, 1}, {0, 1, 2}, {0, 2}, {1, 2}, {1, 2, 3}, {1, 3}, {2, 3}};
    CHECK(cs == expected);
    CHECK(t.maximal_cliques().size() == 2);
    CHECK(t.num_edges() == 5);
}

TEST_CASE("single clique structures") {
    for (int k = 1; k <= 4; ++k) {
        const KTree t = KTree::full_clique(k + 1, k);
        CHECK(cliques_of(t).size() == (std::size_t{1} << (k + 1)) - (k + 2));
    }
    const KTree lone(1, 1, VertexSet::single(0), {});
    CHECK(cliques_of(lone).empty());
    CHECK(score(lone, WeightFunction(1, 0)) == 0.0);
    const KTree small = KTree::full_clique(2, 3);
    CHECK(small.seed().size() == 2);
}

TEST_CASE("construction sequence validation") {
    CHECK_THROWS_AS(KTree(4, 2, VertexSet(0b0011), {}), ValidationError);
    CHECK_THROWS_AS(KTree(4, 2, VertexSet(0b0111), {{3, VertexSet(0b1001)}}), ValidationError);
    CHECK_THROWS_AS(KTree(4, 2, VertexSet(0b0111), {{2, VertexSet(0b0011)}}), ValidationError);
    CHECK_THROWS_AS(KTree(5, 2, VertexSet(0b0111), {{3, VertexSet(0b0011)}}), ValidationError);
    CHECK_THROWS_AS(KTree(4, 2, VertexSet(0b0111), {{3, VertexSet(0b0001)}}), ValidationError);
    // The anchor must lie inside a single existing clique.
    CHECK_THROWS_AS(KTree(5, 2, VertexSet(0b00111), {{3, VertexSet(0b00110)}, {4, VertexSet(0b01001)}}),
                    ValidationError);
}

TEST_CASE("random k-trees against brute-force cliques") {
    oracle::Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = 1 + trial % 3;
        const int n = k + 1 + static_cast<int>(rng() % (7 - k));
        const KTree t = oracle::random_ktree(rng, n, k);
        const auto adj = oracle::matrix_of(n, t.edges());

        CHECK(t.maximal_cliques().size() == 1 + t.attachments().size());
        for (VertexSet c : t.maximal_cliques()) CHECK(c.size() == std::min(k + 1, n));
        auto expected_cliques = oracle::cliques(adj);
        std::sort(expected_cliques.begin(), expected_cliques.end());
        CHECK(as_lists(cliques_of(t)) == expected_cliques);
        CHECK(t.num_edges() == static_cast<std::uint64_t>(k * n - k * (k + 1) / 2));
        CHECK(oracle::is_chordal(adj));

        const WeightFunction wf = oracle::random_weights(rng, n, k, -1.0, 1.0);
        const double expected = oracle::graph_score(adj, oracle::lookup(wf));
        CHECK(std::abs(score(t, wf) - expected) <= 1e-12);
        CHECK(std::abs(score_by_construction(t, wf) - expected) <= 1e-12);
        CHECK(std::abs(chordal_score(t.adjacency(), wf) - expected) <= 1e-12);

        const auto cert = verify_width(n, t.edges(), k);
        CHECK(cert.ok);
        CHECK(is_peo(n, t.edges(), cert.elimination_order));
        if (n > k + 1 && k > 1) CHECK_FALSE(verify_width(n, t.edges(), k - 1).ok);

        const KTree rebuilt = ktree_from_graph(n, t.edges(), k);
        CHECK(rebuilt.edges() == t.edges());
    }
}

TEST_CASE("parity triangle scores ln 2") {
    WeightFunction wf(3, 2);
    wf.set(VertexSet(0b111), std::log(2.0));
    CHECK(score(KTree::full_clique(3, 2), wf) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("width verification") {
    const std::vector<Edge> tree{{0, 1}, {1, 2}, {1, 3}, {3, 4}};
    CHECK(verify_width(5, tree, 1).ok);

    const std::vector<Edge> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    const auto big = verify_width(4, k4, 2);
    CHECK_FALSE(big.ok);
    CHECK(big.witness.size() == 4);
    CHECK(verify_width(4, k4, 3).ok);

    const std::vector<Edge> c5{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {0, 5}};
    const auto cyc = verify_width(6, c5, 3);
    CHECK_FALSE(cyc.ok);
    CHECK(is_chordless_cycle(6, c5, cyc.witness));

    CHECK(verify_width(3, {}, 1).ok);
    CHECK_THROWS_AS(verify_width(3, {{1, 1}}, 1), ValidationError);
    CHECK_THROWS_AS(verify_width(3, {{0, 1}, {1, 0}}, 1), ValidationError);
    CHECK_THROWS_AS(verify_width(3, {{0, 3}}, 1), ValidationError);
}

TEST_CASE("random graphs: certificate agrees with simplicial elimination") {
    oracle::Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 5);
        std::vector<Edge> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng() % 2) edges.emplace_back(u, v);
        const auto adj = oracle::matrix_of(n, edges);
        const bool chordal = oracle::is_chordal(adj);
        const int omega = oracle::clique_number(adj);
        for (int k = 1; k <= 3; ++k) {
            const auto cert = verify_width(n, edges, k);
            CHECK(cert.ok == (chordal && omega <= k + 1));
            if (cert.ok) {
                CHECK(is_peo(n, edges, cert.elimination_order));
                const KTree t = ktree_from_graph(n, edges, k);
                const auto ktree_adj = oracle::matrix_of(n, t.edges());
                for (auto [u, v] : edges) CHECK(ktree_adj[u][v]);
            } else if (!chordal) {
                CHECK(is_chordless_cycle(n, edges, cert.witness));
            }
        }
    }
}

TEST_CASE("adding cliques never lowers the score of data weights") {
    oracle::Rng rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 6;
        const auto raw = oracle::random_raw(rng, n, 150, {2, 3});
        const WeightFunction wf = compute_weights(oracle::to_dataset(raw), 2);
        const KTree t = oracle::random_ktree(rng, n, 2);
        // Dropping one edge from the last attached vertex leaves a chordal subgraph.
        const auto& last = t.attachments().back();
        const int u = last.anchor.members().front();
        std::vector<Edge> sub;
        for (auto e : t.edges())
            if (e != Edge(std::min(u, last.vertex), std::max(u, last.vertex))) sub.push_back(e);
        REQUIRE(oracle::is_chordal(oracle::matrix_of(n, sub)));
        const double small = chordal_score(adjacency_from_edges(n, sub), wf);
        CHECK(small == doctest::Approx(oracle::graph_score(oracle::matrix_of(n, sub), oracle::lookup(wf))).epsilon(1e-12));
        CHECK(score(t, wf) >= small - 1e-9);
    }
}

TEST_CASE("coverage checks") {
    const KTree t = KTree::full_clique(3, 2);
    CHECK_THROWS_AS(score(t, WeightFunction(3, 1)), ValidationError);
    CHECK_THROWS_AS(score(t, WeightFunction(4, 2)), ValidationError);
}
