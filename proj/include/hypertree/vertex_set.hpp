#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace hypertree {

inline constexpr int kMaxVertices = 64;

// A set of vertices (variables) over [0, 64), stored as a bitmask. The bit
// order doubles as the canonical sorted-subset form used as a map key
// throughout the library.
class VertexSet {
public:
    constexpr VertexSet() = default;
    constexpr explicit VertexSet(std::uint64_t bits) : bits_(bits) {}
    VertexSet(std::initializer_list<int> vertices) {
        for (int v : vertices) bits_ |= bit(v);
    }

    static VertexSet from_list(const std::vector<int>& vertices) {
        VertexSet s;
        for (int v : vertices) s.bits_ |= bit(v);
        return s;
    }

    static constexpr VertexSet range(int n) {
        return VertexSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
    }

    static constexpr VertexSet single(int v) { return VertexSet(bit(v)); }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool contains(int v) const { return (bits_ >> v) & 1U; }
    constexpr bool subset_of(VertexSet other) const { return (bits_ & ~other.bits_) == 0; }

    constexpr int min() const { return std::countr_zero(bits_); }
    constexpr int max() const { return 63 - std::countl_zero(bits_); }

    constexpr VertexSet with(int v) const { return VertexSet(bits_ | bit(v)); }
    constexpr VertexSet without(int v) const { return VertexSet(bits_ & ~bit(v)); }

    constexpr VertexSet operator|(VertexSet o) const { return VertexSet(bits_ | o.bits_); }
    constexpr VertexSet operator&(VertexSet o) const { return VertexSet(bits_ & o.bits_); }
    constexpr VertexSet operator-(VertexSet o) const { return VertexSet(bits_ & ~o.bits_); }
    constexpr bool operator==(const VertexSet&) const = default;

    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(size());
        for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
        return out;
    }

    // Lexicographic order on the sorted member lists.
    static bool lex_less(VertexSet a, VertexSet b) {
        std::uint64_t x = a.bits_, y = b.bits_;
        while (x && y) {
            int i = std::countr_zero(x), j = std::countr_zero(y);
            if (i != j) return i < j;
            x &= x - 1;
            y &= y - 1;
        }
        return !x && y;
    }

    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (int v : members()) {
            if (!first) out += ",";
            out += std::to_string(v);
            first = false;
        }
        return out + "}";
    }

    // Calls f(VertexSet) for every non-empty subset, including the set itself.
    template <class F>
    void for_each_nonempty_subset(F&& f) const {
        for (std::uint64_t s = bits_; s; s = (s - 1) & bits_) f(VertexSet(s));
    }

private:
    static constexpr std::uint64_t bit(int v) { return std::uint64_t{1} << v; }

    std::uint64_t bits_ = 0;
};

struct VertexSetHash {
    std::size_t operator()(VertexSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};

// Binomial coefficients for n, r <= 64, saturating on overflow.
std::uint64_t binomial(int n, int r);

// Rank of a fixed-size subset in colexicographic order. Subsets of size r of
// [0, n) map bijectively onto [0, binomial(n, r)).
std::uint64_t colex_rank(VertexSet s);

// Calls f(VertexSet) for every subset of [0, n) of size r, in colex order.
template <class F>
void for_each_subset_of_size(int n, int r, F&& f) {
    if (r < 0 || r > n) return;
    if (r == 0) {
        f(VertexSet{});
        return;
    }
    std::uint64_t s = (std::uint64_t{1} << r) - 1;
    const std::uint64_t limit = n >= 64 ? 0 : (std::uint64_t{1} << n);
    while (true) {
        f(VertexSet(s));
        // Gosper's hack: next integer with the same popcount.
        const std::uint64_t c = s & (~s + 1);
        const std::uint64_t hi = s + c;
        if (hi == 0) break;
        s = (((hi ^ s) >> 2) / c) | hi;
        if (limit != 0 && s >= limit) break;
    }
}

// All subsets of [0, n) of size r in colex order; index i has colex rank i.
std::vector<VertexSet> subsets_of_size(int n, int r);

}  // namespace hypertree
