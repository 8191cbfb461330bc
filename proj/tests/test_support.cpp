#include "test_support.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace oracle {

using hypertree::Edge;
using hypertree::VertexSet;

RawData random_raw(Rng& rng, int n, int rows, const std::vector<int>& arity_choices) {
    RawData raw;
    std::uniform_int_distribution<std::size_t> pick_arity(0, arity_choices.size() - 1);
    for (int v = 0; v < n; ++v) raw.arities.push_back(arity_choices[pick_arity(rng)]);

    std::vector<int> parent_a(n, -1), parent_b(n, -1);
    for (int v = 1; v < n; ++v) {
        parent_a[v] = std::uniform_int_distribution<int>(0, v - 1)(rng);
        if (v > 1 && std::bernoulli_distribution(0.4)(rng)) parent_b[v] = std::uniform_int_distribution<int>(0, v - 1)(rng);
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int r = 0; r < rows; ++r) {
        std::vector<int> x(n);
        for (int v = 0; v < n; ++v) {
            const int m = raw.arities[v];
            if (parent_a[v] < 0 || unit(rng) < 0.35) {
                x[v] = std::uniform_int_distribution<int>(0, m - 1)(rng);
            } else {
                int s = x[parent_a[v]];
                if (parent_b[v] >= 0) s += x[parent_b[v]];
                x[v] = s % m;
            }
        }
        raw.rows.push_back(std::move(x));
    }
    return raw;
}

hypertree::Dataset to_dataset(const RawData& raw) {
    std::vector<hypertree::VariableSpec> specs;
    for (std::size_t v = 0; v < raw.arities.size(); ++v) specs.push_back({"v" + std::to_string(v), raw.arities[v]});
    std::vector<std::int32_t> flat;
    for (const auto& row : raw.rows) flat.insert(flat.end(), row.begin(), row.end());
    return hypertree::Dataset(std::move(specs), std::move(flat));
}

RawJoint random_joint(Rng& rng, const std::vector<int>& arities, double zero_fraction) {
    std::size_t cells = 1;
    for (int a : arities) cells *= static_cast<std::size_t>(a);
    std::exponential_distribution<double> draw(1.0);
    std::bernoulli_distribution zero(zero_fraction);
    RawJoint j{arities, std::vector<double>(cells, 0.0)};
    for (auto& p : j.probs) p = zero(rng) ? 0.0 : draw(rng);
    if (std::all_of(j.probs.begin(), j.probs.end(), [](double p) { return p == 0.0; })) j.probs[0] = 1.0;
    const double total = std::accumulate(j.probs.begin(), j.probs.end(), 0.0);
    for (auto& p : j.probs) p /= total;
    return j;
}

hypertree::JointTable to_joint(const RawJoint& joint) { return hypertree::JointTable(joint.arities, joint.probs); }

RawJoint binary_chain(int n, double flip) {
    RawJoint j{std::vector<int>(n, 2), std::vector<double>(std::size_t{1} << n, 0.0)};
    for (std::size_t c = 0; c < j.probs.size(); ++c) {
        // Variable 0 is the most significant digit.
        double p = 0.5;
        for (int v = 1; v < n; ++v) {
            const int prev = (c >> (n - v)) & 1;
            const int cur = (c >> (n - 1 - v)) & 1;
            p *= prev == cur ? 1.0 - flip : flip;
        }
        j.probs[c] = p;
    }
    return j;
}

namespace {

double entropy_of_counts(const std::map<std::vector<int>, double>& masses) {
    double total = 0.0;
    for (const auto& [_, m] : masses) total += m;
    double h = 0.0;
    for (const auto& [_, m] : masses)
        if (m > 0.0) h -= (m / total) * std::log(m / total);
    return h;
}

std::vector<int> project_row(const std::vector<int>& row, const std::vector<int>& scope) {
    std::vector<int> key;
    for (int v : scope) key.push_back(row[v]);
    return key;
}

}  // namespace

double entropy(const RawData& raw, const std::vector<int>& scope) {
    std::map<std::vector<int>, double> masses;
    for (const auto& row : raw.rows) masses[project_row(row, scope)] += 1.0;
    return entropy_of_counts(masses);
}

double entropy(const RawJoint& joint, const std::vector<int>& scope) {
    std::map<std::vector<int>, double> masses;
    const int n = static_cast<int>(joint.arities.size());
    std::vector<int> x(n, 0);
    for (double p : joint.probs) {
        masses[project_row(x, scope)] += p;
        for (int v = n - 1; v >= 0; --v) {
            if (++x[v] < joint.arities[v]) break;
            x[v] = 0;
        }
    }
    return entropy_of_counts(masses);
}

double weight(const std::function<double(const std::vector<int>&)>& entropy_of, const std::vector<int>& h) {
    const int m = static_cast<int>(h.size());
    double w = 0.0;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> sub;
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1) sub.push_back(h[i]);
        const int sign = ((m - static_cast<int>(sub.size())) % 2 == 0) ? 1 : -1;
        w -= sign * entropy_of(sub);
    }
    return w;
}

Matrix matrix_of(int n, const std::vector<Edge>& edges) {
    Matrix adj(n, std::vector<bool>(n, false));
    for (auto [u, v] : edges) adj[u][v] = adj[v][u] = true;
    return adj;
}

bool is_chordal(const Matrix& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<bool> alive(n, true);
    for (int removed = 0; removed < n; ++removed) {
        int simplicial = -1;
        for (int v = 0; v < n && simplicial < 0; ++v) {
            if (!alive[v]) continue;
            std::vector<int> nb;
            for (int u = 0; u < n; ++u)
                if (alive[u] && adj[v][u]) nb.push_back(u);
            bool ok = true;
            for (std::size_t i = 0; i < nb.size() && ok; ++i)
                for (std::size_t j = i + 1; j < nb.size() && ok; ++j) ok = adj[nb[i]][nb[j]];
            if (ok) simplicial = v;
        }
        if (simplicial < 0) return false;
        alive[simplicial] = false;
    }
    return true;
}

bool is_connected(const Matrix& adj) {
    const int n = static_cast<int>(adj.size());
    if (n == 0) return true;
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < n; ++u)
            if (adj[v][u] && !seen[u]) seen[u] = true, stack.push_back(u);
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

std::vector<std::vector<int>> cliques(const Matrix& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<std::vector<int>> out;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        if (std::popcount(mask) < 2) continue;
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
            if (mask >> v & 1) members.push_back(v);
        bool complete = true;
        for (std::size_t i = 0; i < members.size() && complete; ++i)
            for (std::size_t j = i + 1; j < members.size() && complete; ++j) complete = adj[members[i]][members[j]];
        if (complete) out.push_back(std::move(members));
    }
    return out;
}

int clique_number(const Matrix& adj) {
    int best = adj.empty() ? 0 : 1;
    for (const auto& c : cliques(adj)) best = std::max(best, static_cast<int>(c.size()));
    return best;
}

double graph_score(const Matrix& adj, const std::function<double(const std::vector<int>&)>& w) {
    double total = 0.0;
    for (const auto& c : cliques(adj)) total += w(c);
    return total;
}

BestKTrees brute_force_ktrees(int n, int k, const std::function<double(const std::vector<int>&)>& w) {
    std::vector<Edge> all;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) all.emplace_back(u, v);
    const int m = static_cast<int>(all.size());
    const int target = k * n - k * (k + 1) / 2;

    BestKTrees out;
    out.best = -std::numeric_limits<double>::infinity();
    out.runner_up = -std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = (std::uint64_t{1} << target) - 1; mask < (std::uint64_t{1} << m);) {
        std::vector<Edge> edges;
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1) edges.push_back(all[i]);
        const Matrix adj = matrix_of(n, edges);
        if (is_connected(adj) && is_chordal(adj) && clique_number(adj) == k + 1) {
            ++out.count;
            const double s = graph_score(adj, w);
            if (s > out.best) {
                out.runner_up = out.best;
                out.best = s;
                out.best_edges = edges;
            } else {
                out.runner_up = std::max(out.runner_up, s);
            }
        }
        if (target == 0) break;
        const std::uint64_t c = mask & (~mask + 1);
        const std::uint64_t r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    return out;
}

hypertree::KTree random_ktree(Rng& rng, int n, int k) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int seed_size = std::min(k + 1, n);
    VertexSet seed;
    for (int i = 0; i < seed_size; ++i) seed = seed.with(order[i]);
    std::vector<VertexSet> maximal{seed};
    std::vector<hypertree::Attachment> attachments;
    for (int i = seed_size; i < n; ++i) {
        const VertexSet host = maximal[std::uniform_int_distribution<std::size_t>(0, maximal.size() - 1)(rng)];
        const auto members = host.members();
        const int drop = members[std::uniform_int_distribution<std::size_t>(0, members.size() - 1)(rng)];
        const VertexSet anchor = host.without(drop);
        attachments.push_back({order[i], anchor});
        maximal.push_back(anchor.with(order[i]));
    }
    return hypertree::KTree(n, k, seed, std::move(attachments));
}

hypertree::WeightFunction random_weights(Rng& rng, int n, int k, double lo, double hi) {
    hypertree::WeightFunction wf(n, k);
    std::uniform_real_distribution<double> draw(lo, hi);
    for (int s = 2; s <= k + 1; ++s)
        for (auto& w : wf.level(s)) w = draw(rng);
    return wf;
}

std::function<double(const std::vector<int>&)> lookup(const hypertree::WeightFunction& wf) {
    return [&wf](const std::vector<int>& h) { return wf.at(set_of(h)); };
}

VertexSet set_of(const std::vector<int>& members) {
    VertexSet s;
    for (int v : members) s = s.with(v);
    return s;
}

}  // namespace oracle
