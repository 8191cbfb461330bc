#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hypertree/vertex_set.hpp"
#include "hypertree/weights.hpp"

namespace hypertree {

using Edge = std::pair<int, int>;

// Per-vertex neighbour bitmasks.
using Adjacency = std::vector<std::uint64_t>;

struct Attachment {
    int vertex = 0;
    VertexSet anchor;

    bool operator==(const Attachment&) const = default;
};

// A width-k triangulated graph given by its construction sequence: a seed
// clique of min(k+1, n) vertices, then each remaining vertex joined to a
// k-clique that already exists. Validated on construction.
class KTree {
public:
    KTree(int n, int k, VertexSet seed, std::vector<Attachment> attachments);

    // The unique structure when n <= k+1: one clique on every vertex.
    static KTree full_clique(int n, int k);

    int n() const { return n_; }
    int k() const { return k_; }
    VertexSet seed() const { return seed_; }
    const std::vector<Attachment>& attachments() const { return attachments_; }

    // Seed first, then anchor + vertex for each attachment, in order.
    std::vector<VertexSet> maximal_cliques() const;
    std::vector<Edge> edges() const;  // sorted, u < v
    Adjacency adjacency() const;
    std::uint64_t num_edges() const;

    bool operator==(const KTree&) const = default;

private:
    int n_;
    int k_;
    VertexSet seed_;
    std::vector<Attachment> attachments_;
};

// Every clique of size >= 2, deduplicated, ordered by size then
// lexicographically. Closed under taking subsets of size >= 2.
using CliqueSet = std::vector<VertexSet>;

CliqueSet cliques_of(const KTree& tree);

// Sum of w(h) over cliques_of(tree); singletons excluded.
double score(const KTree& tree, const WeightFunction& wf);

// Same value accumulated along the construction sequence: seed clique weight
// plus one attachment_gain per attachment. No deduplication needed.
double score_by_construction(const KTree& tree, const WeightFunction& wf);

struct WidthCertificate {
    bool ok = false;
    // Perfect elimination ordering when ok; otherwise the MCS order examined.
    std::vector<int> elimination_order;
    // Failure witness: a chordless cycle (or a non-adjacent pair with a common
    // earlier neighbour when no cycle could be traced) or an oversized clique.
    std::vector<int> witness;
    std::string reason;
};

// Decides whether the graph is chordal with maximum clique <= k+1 using
// maximum-cardinality search. Self-loops and duplicate edges are errors.
WidthCertificate verify_width(int n, const std::vector<Edge>& edges, int k);

// Builds a k-tree containing the input graph by replaying the reverse of a
// perfect elimination ordering, completing each anchor to k vertices with
// the lexicographically smallest fill.
KTree ktree_from_graph(int n, const std::vector<Edge>& edges, int k);

Adjacency adjacency_from_edges(int n, const std::vector<Edge>& edges);
std::vector<Edge> edges_from_adjacency(const Adjacency& adj);

// Total clique weight (sizes >= 2) of a chordal graph with cliques of at most
// wf.k()+1 vertices, using the elimination ordering to visit every clique once.
double chordal_score(const Adjacency& adj, const WeightFunction& wf);

}  // namespace hypertree
