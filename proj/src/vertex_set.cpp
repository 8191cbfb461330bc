#include "hypertree/vertex_set.hpp"

#include <array>
#include <limits>

namespace hypertree {

namespace {

struct BinomialTable {
    std::array<std::array<std::uint64_t, 65>, 65> c{};

    BinomialTable() {
        constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
        for (int n = 0; n <= 64; ++n) {
            c[n][0] = 1;
            for (int r = 1; r <= n; ++r) {
                const std::uint64_t a = c[n - 1][r - 1];
                const std::uint64_t b = r <= n - 1 ? c[n - 1][r] : 0;
                c[n][r] = (a > kMax - b) ? kMax : a + b;
            }
        }
    }
};

const BinomialTable& table() {
    static const BinomialTable t;
    return t;
}

}  // namespace

std::uint64_t binomial(int n, int r) {
    if (n < 0 || r < 0 || r > n || n > 64) return 0;
    return table().c[n][r];
}

std::uint64_t colex_rank(VertexSet s) {
    const auto& c = table().c;
    std::uint64_t rank = 0;
    int i = 1;
    for (std::uint64_t b = s.bits(); b; b &= b - 1) rank += c[std::countr_zero(b)][i++];
    return rank;
}

std::vector<VertexSet> subsets_of_size(int n, int r) {
    std::vector<VertexSet> out;
    out.reserve(static_cast<std::size_t>(binomial(n, r)));
    for_each_subset_of_size(n, r, [&](VertexSet s) { out.push_back(s); });
    return out;
}

}  // namespace hypertree
