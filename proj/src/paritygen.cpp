#include "hypertree/paritygen.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

#include "hypertree/errors.hpp"

namespace hypertree {

double bias_to_weight(double b) {
    if (!(b >= 0.0 && b < 1.0)) throw ValidationError("bias must lie in [0, 1)");
    return 0.5 * ((1.0 + b) * std::log1p(b) + (1.0 - b) * std::log1p(-b));
}

double weight_to_bias(double w) {
    if (!(w >= 0.0 && w < std::log(2.0))) throw ValidationError("weight must lie in [0, ln 2)");
    constexpr double kTop = 1.0 - std::numeric_limits<double>::epsilon();
    if (w >= bias_to_weight(kTop)) throw ValidationError("weight too close to ln 2 to invert");
    double lo = 0.0, hi = kTop;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        (bias_to_weight(mid) < w ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

TargetBiases::TargetBiases(int n, int k, std::int64_t q) : n_(n), k_(k), q_(q) {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (n < k + 1 || n > kMaxVertices) throw ValidationError("need k+1 <= n <= 64");
    if (q < 1) throw ValidationError("common denominator Q must be >= 1");
    p_.assign(static_cast<std::size_t>(binomial(n, k + 1)), 0);
}

std::size_t TargetBiases::index_of(VertexSet h) const {
    if (h.size() != k_ + 1 || !h.subset_of(VertexSet::range(n_)))
        throw ValidationError("bias set " + h.to_string() + " must have k+1=" + std::to_string(k_ + 1) +
                              " vertices in [0, n)");
    return static_cast<std::size_t>(colex_rank(h));
}

std::int64_t TargetBiases::at(VertexSet h) const { return p_[index_of(h)]; }

void TargetBiases::set(VertexSet h, std::int64_t p) {
    if (p < 0 || p >= q_)
        throw ValidationError("bias numerator " + std::to_string(p) + " for " + h.to_string() + " outside [0, Q)");
    p_[index_of(h)] = p;
}

// ---------------------------------------------------------------------------

ParitySample generate(const TargetBiases& biases, int max_vertices) {
    const int n = biases.n();
    if (n > max_vertices)
        throw GuardError("parity sample refused: n=" + std::to_string(n) + " exceeds the limit of " +
                         std::to_string(max_vertices) + " (blocks have 2^n rows)");
    if (n > 30) throw GuardError("parity sample supports at most 30 variables");

    const auto sets = subsets_of_size(n, biases.k() + 1);
    const std::int64_t q = biases.q();
    const std::uint64_t cube = std::uint64_t{1} << n;

    const auto limit = std::numeric_limits<std::uint64_t>::max();
    if (sets.size() > limit / static_cast<std::uint64_t>(q) / cube)
        throw GuardError("pooled sample size overflows 64 bits");

    std::vector<BlockRecord> blocks;
    std::uint64_t uniform_total = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const std::int64_t p = biases.numerators()[i];
        blocks.push_back({sets[i], q - p, p});
        uniform_total += static_cast<std::uint64_t>(q - p);
    }

    // Row x is the vector with variable v = bit v of x. It appears once per
    // uniform block and twice per parity block whose target it is odd on.
    std::vector<std::uint64_t> multiplicity(cube);
    std::vector<std::int32_t> rows(cube * static_cast<std::uint64_t>(n));
    const auto cells = static_cast<long long>(cube);
#pragma omp parallel for schedule(static)
    for (long long x = 0; x < cells; ++x) {
        std::uint64_t count = uniform_total;
        for (const auto& b : blocks)
            if (std::popcount(static_cast<std::uint64_t>(x) & b.target.bits()) & 1)
                count += 2 * static_cast<std::uint64_t>(b.parity_blocks);
        multiplicity[x] = count;
        for (int v = 0; v < n; ++v) rows[x * n + v] = static_cast<std::int32_t>((x >> v) & 1);
    }

    std::vector<VariableSpec> specs;
    for (int v = 0; v < n; ++v) specs.push_back({"x" + std::to_string(v), 2});

    Dataset data(std::move(specs), std::move(rows), std::move(multiplicity));
    return ParitySample{std::move(data), std::move(blocks), cube};
}

void write_parity_csv(std::ostream& out, const ParitySample& sample) {
    const int n = sample.dataset.num_vars();
    const std::uint64_t cube = sample.rows_per_block;
    for (int v = 0; v < n; ++v) out << (v ? "," : "") << sample.dataset.specs()[v].name;
    out << '\n';

    auto line_of = [n](std::uint64_t vars) {
        std::string line;
        for (int v = 0; v < n; ++v) {
            if (v) line += ',';
            line += ((vars >> v) & 1) ? '1' : '0';
        }
        line += '\n';
        return line;
    };

    for (const auto& b : sample.blocks) {
        for (std::int64_t i = 0; i < b.uniform_blocks; ++i)
            for (std::uint64_t x = 0; x < cube; ++x) out << line_of(x);
        for (std::int64_t i = 0; i < b.parity_blocks; ++i)
            for (int copy = 0; copy < 2; ++copy)
                for (std::uint64_t x = 0; x < cube; ++x)
                    if (std::popcount(x & b.target.bits()) & 1) out << line_of(x);
    }
}

// ---------------------------------------------------------------------------

RealizedBiases realize_weights(int n, int k, const std::map<std::uint64_t, double>& targets, std::int64_t q_grid) {
    if (q_grid < 2) throw ValidationError("bias grid denominator must be >= 2");
    TargetBiases biases(n, k, q_grid);
    const auto sets = subsets_of_size(n, k + 1);

    std::vector<double> w(sets.size(), 0.0);
    double max_target = 0.0;
    for (const auto& [bits, value] : targets) {
        const VertexSet h(bits);
        if (h.size() != k + 1 || !h.subset_of(VertexSet::range(n)))
            throw ValidationError("target set " + h.to_string() + " must have k+1 vertices in [0, n)");
        if (!(value >= 0.0)) throw ValidationError("target weight for " + h.to_string() + " is negative");
        w[colex_rank(h)] = value;
        max_target = std::max(max_target, value);
    }

    const double c_sets = static_cast<double>(binomial(n, k + 1));
    RealizedBiases out{biases, 0.0, 0.0, std::vector<double>(sets.size(), 0.0), 0.0};
    if (max_target == 0.0) return out;

    const double top_bias = static_cast<double>(q_grid - 1) / (static_cast<double>(q_grid) * c_sets);
    out.margin = 2.0 * bias_to_weight(top_bias);
    out.scale = 0.5 / max_target * out.margin;

    for (std::size_t i = 0; i < sets.size(); ++i) {
        const double b = weight_to_bias(out.scale * w[i]);
        const auto p = static_cast<std::int64_t>(std::llround(b * c_sets * static_cast<double>(q_grid)));
        if (p >= q_grid)
            throw ValidationError("infeasible scaling: set " + sets[i].to_string() + " needs bias numerator " +
                                  std::to_string(p) + " >= Q=" + std::to_string(q_grid));
        out.biases.set(sets[i], p);
        const double induced = bias_to_weight(static_cast<double>(p) / (static_cast<double>(q_grid) * c_sets));
        out.errors[i] = induced - out.scale * w[i];
        out.total_error += std::abs(out.errors[i]);
    }
    return out;
}

}  // namespace hypertree
