#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "hypertree/dataset.hpp"
#include "hypertree/vertex_set.hpp"

namespace hypertree {

// Weight (nats) induced on a (k+1)-set of binary variables whose parity has
// bias b while every smaller marginal is uniform:
// ((1+b) ln(1+b) + (1-b) ln(1-b)) / 2. Requires 0 <= b < 1.
double bias_to_weight(double b);

// Inverse of bias_to_weight by bisection (absolute tolerance 1e-12 on b).
// Requires 0 <= w < ln 2.
double weight_to_bias(double w);

// Rational parity biases p_h / Q for every (k+1)-subset of n binary variables.
class TargetBiases {
public:
    TargetBiases(int n, int k, std::int64_t q);

    int n() const { return n_; }
    int k() const { return k_; }
    std::int64_t q() const { return q_; }
    std::int64_t at(VertexSet h) const;
    void set(VertexSet h, std::int64_t p);

    // Numerators in colex order of the (k+1)-subsets.
    const std::vector<std::int64_t>& numerators() const { return p_; }

private:
    std::size_t index_of(VertexSet h) const;

    int n_;
    int k_;
    std::int64_t q_;
    std::vector<std::int64_t> p_;
};

// How the pooled sample for one target set was assembled: uniform-cube blocks
// first, then parity-fixed blocks (odd-parity slice on h, each vector twice).
struct BlockRecord {
    VertexSet target;
    std::int64_t uniform_blocks = 0;
    std::int64_t parity_blocks = 0;
};

struct ParitySample {
    // Every binary vector once, weighted by how often the pool contains it.
    Dataset dataset;
    std::vector<BlockRecord> blocks;  // colex order of the target sets
    std::uint64_t rows_per_block = 0;  // 2^n
};

inline constexpr int kDefaultParityVertexLimit = 14;

// Pools, for each (k+1)-set h, (Q - p_h) uniform blocks and p_h parity-fixed
// blocks. Every marginal over at most k variables is exactly uniform and the
// parity of h is odd with probability (1 + p_h / (Q C(n,k+1))) / 2.
ParitySample generate(const TargetBiases& biases, int max_vertices = kDefaultParityVertexLimit);

// Streams the pooled sample as CSV in block order: for each target set, its
// uniform blocks then its parity-fixed blocks.
void write_parity_csv(std::ostream& out, const ParitySample& sample);

struct RealizedBiases {
    TargetBiases biases;
    double scale = 0.0;   // c: induced weights approximate c * target
    double margin = 0.0;  // c = (0.5 / max target) * margin
    std::vector<double> errors;  // induced minus c * target, colex order
    double total_error = 0.0;    // sum of |errors|
};

// Rounds the biases that would realise c * target onto the grid 1/q_grid.
// The scaling puts the largest target at bias (q_grid-1)/(q_grid C(n,k+1)),
// so every numerator stays below q_grid. Missing targets are zero.
RealizedBiases realize_weights(int n, int k, const std::map<std::uint64_t, double>& targets, std::int64_t q_grid);

}  // namespace hypertree
