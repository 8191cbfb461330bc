#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hypertree/dataset.hpp"
#include "hypertree/errors.hpp"
#include "test_support.hpp"

using namespace hypertree;

namespace {

Dataset parse(const std::string& text, const ArityOverrides& overrides = {}) {
    std::istringstream in(text);
    return load_dataset(in, overrides);
}

std::vector<int> members(VertexSet s) { return s.members(); }

}  // namespace

TEST_CASE("entropy of a two-cell table") {
    const MarginalTable m(VertexSet::single(0), {2}, {0.25, 0.75});
    CHECK(entropy(m) == doctest::Approx(0.5623351446188083).epsilon(1e-14));
    const MarginalTable zero(VertexSet::single(0), {3}, {0.0, 1.0, 0.0});
    CHECK(entropy(zero) == 0.0);
}

TEST_CASE("mutual information of a small sample") {
    const Dataset d = parse("x,y\n0,0\n0,1\n1,1\n1,1\n");
    CHECK(mutual_information(d, 0, 1) == doctest::Approx(0.2157615543388357).epsilon(1e-12));
    CHECK_THROWS_AS(mutual_information(d, 0, 0), ValidationError);
}

TEST_CASE("marginal counts and entropies match map counting") {
    oracle::Rng rng(7);
    const auto raw = oracle::random_raw(rng, 6, 300, {2, 3, 4});
    const Dataset d = oracle::to_dataset(raw);
    CHECK(d.sample_size() == 300);
    for (std::uint64_t bits = 1; bits < 64; ++bits) {
        const VertexSet s(bits);
        CHECK(d.entropy(s) == doctest::Approx(oracle::entropy(raw, members(s))).epsilon(1e-13));
    }
    CHECK(d.joint_entropy() == doctest::Approx(oracle::entropy(raw, {0, 1, 2, 3, 4, 5})).epsilon(1e-13));

    const auto counts = d.counts(VertexSet(0b101));
    std::uint64_t direct = 0;
    for (const auto& row : raw.rows) direct += (row[0] == 1 && row[2] == 0);
    CHECK(counts[1 * raw.arities[2] + 0] == direct);
}

TEST_CASE("sum_out agrees with a direct marginal") {
    oracle::Rng rng(3);
    const Dataset d = oracle::to_dataset(oracle::random_raw(rng, 4, 100, {2, 3}));
    const auto full = d.marginal(VertexSet(0b1111)).sum_out(2);
    const auto direct = d.marginal(VertexSet(0b1011));
    REQUIRE(full.size() == direct.size());
    for (std::size_t i = 0; i < full.size(); ++i) CHECK(full[i] == doctest::Approx(direct[i]).epsilon(1e-15));
}

TEST_CASE("multiplicities behave like repeated rows") {
    std::vector<VariableSpec> specs{{"a", 2}, {"b", 3}};
    const Dataset weighted(specs, {0, 1, 1, 2, 1, 0}, {3, 1, 2});
    const Dataset expanded(specs, {0, 1, 0, 1, 0, 1, 1, 2, 1, 0, 1, 0});
    CHECK(weighted.sample_size() == 6);
    CHECK(weighted.num_rows() == 3);
    for (std::uint64_t bits = 1; bits < 4; ++bits)
        CHECK(weighted.entropy(VertexSet(bits)) == doctest::Approx(expanded.entropy(VertexSet(bits))));
    CHECK(weighted.counts(VertexSet(0b11)) == expanded.counts(VertexSet(0b11)));

    std::ostringstream out;
    write_dataset_csv(out, weighted);
    const Dataset back = parse(out.str(), {{"b", 3}});
    CHECK(back.sample_size() == 6);
    CHECK(back.counts(VertexSet(0b11)) == expanded.counts(VertexSet(0b11)));
}

TEST_CASE("CSV arity inference and overrides") {
    const Dataset d = parse("a,b,c\n0,2,0\n1,0,0\n");
    CHECK(d.specs()[0].arity == 2);
    CHECK(d.specs()[1].arity == 3);
    CHECK(d.specs()[2].arity == 2);
    CHECK(d.specs()[1].name == "b");

    const Dataset wide = parse("a,b\n0,1\n", {{"a", 5}});
    CHECK(wide.arity(0) == 5);
    CHECK(wide.marginal(VertexSet::single(0)).size() == 5);

    CHECK_THROWS_AS(parse("a,b\n0,3\n", {{"b", 2}}), ParseError);
    CHECK_THROWS_AS(parse("a\n0\n", {{"zz", 2}}), ValidationError);
    CHECK(parse_arity_sidecar(R"({"arities": {"a": 4}})").at("a") == 4);
    CHECK_THROWS_AS(parse_arity_sidecar(R"({"arities": {"a": 1}})"), ValidationError);
}

TEST_CASE("CSV errors carry locations") {
    try {
        parse("a,b\n0,1\n0\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3);
    }
    try {
        parse("a,b\n0,1\n0,x\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.row() == 3);
        CHECK(e.column() == 2);
    }
    CHECK_THROWS_AS(parse("a,b\n0,-1\n"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("a,b\n"), ParseError);
    CHECK_THROWS_AS(parse("a,a\n0,1\n"), ValidationError);
    CHECK_THROWS_AS(load_dataset_file("/nonexistent/file.csv"), IoError);
}

TEST_CASE("joint tables") {
    oracle::Rng rng(11);
    const auto raw = oracle::random_joint(rng, {2, 3, 2}, 0.2);
    const JointTable j = oracle::to_joint(raw);
    for (std::uint64_t bits = 1; bits < 8; ++bits)
        CHECK(j.entropy(VertexSet(bits)) == doctest::Approx(oracle::entropy(raw, members(VertexSet(bits)))).epsilon(1e-13));
    CHECK(j.joint_entropy() == doctest::Approx(oracle::entropy(raw, {0, 1, 2})).epsilon(1e-13));

    double mass = 0.0;
    int points = 0;
    j.for_each_support_point([&](std::span<const int> x, double p) {
        CHECK(p > 0.0);
        CHECK(j.prob(x) == p);
        mass += p;
        ++points;
    });
    CHECK(mass == doctest::Approx(1.0));
    CHECK(points == std::count_if(raw.probs.begin(), raw.probs.end(), [](double p) { return p > 0; }));

    CHECK_THROWS_AS(JointTable({2, 2}, {0.5, 0.5, 0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(JointTable({2, 2}, {0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(JointTable({2}, {1.5, -0.5}), ValidationError);

    const JointTable parsed = parse_joint_table(R"({"arities": [2], "probs": [0.25, 0.75]})");
    CHECK(parsed.entropy(VertexSet::single(0)) == doctest::Approx(0.5623351446188083));
}

TEST_CASE("scope validation") {
    const Dataset d = parse("a,b\n0,1\n");
    CHECK_THROWS_AS(d.marginal(VertexSet::single(5)), ValidationError);
    CHECK_THROWS_AS(d.marginal(VertexSet()), ValidationError);
}
