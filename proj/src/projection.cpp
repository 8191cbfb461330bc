#include "hypertree/projection.hpp"

#include <algorithm>
#include <cmath>

#include "hypertree/errors.hpp"

namespace hypertree {

namespace {

std::vector<VariableSpec> variables_of(const MarginalSource& source) {
    if (const auto* data = dynamic_cast<const Dataset*>(&source)) return data->specs();
    std::vector<VariableSpec> out;
    for (int v = 0; v < source.num_vars(); ++v) out.push_back({"x" + std::to_string(v), source.arity(v)});
    return out;
}

// All cliques of the tree including singletons, by size then lexicographic.
std::vector<VertexSet> all_cliques(const KTree& tree) {
    std::vector<VertexSet> out;
    for (int v = 0; v < tree.n(); ++v) out.push_back(VertexSet::single(v));
    const auto larger = cliques_of(tree);
    out.insert(out.end(), larger.begin(), larger.end());
    return out;
}

// Decodes a cell index into a scope-local assignment.
void decode(std::size_t cell, const std::vector<int>& arities, std::vector<int>& local) {
    for (std::size_t i = arities.size(); i-- > 0;) {
        local[i] = static_cast<int>(cell % arities[i]);
        cell /= arities[i];
    }
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

void check_shared_variables(const ProjectedModel& model, const Dataset& data) {
    const auto& a = model.variables();
    const auto& b = data.specs();
    if (a.size() != b.size()) throw ValidationError("model and dataset have different variable counts");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].name != b[i].name || a[i].arity != b[i].arity)
            throw ValidationError("model and dataset disagree on variable " + std::to_string(i) + " ('" +
                                  a[i].name + "' vs '" + b[i].name + "')");
}

}  // namespace

std::size_t Factor::cell(std::span<const int> full) const {
    std::size_t idx = 0;
    std::size_t i = 0;
    for (std::uint64_t b = scope.bits(); b; b &= b - 1, ++i) idx = idx * arities[i] + full[std::countr_zero(b)];
    return idx;
}

ProjectedModel::ProjectedModel(KTree tree, std::vector<VariableSpec> variables, std::vector<Factor> factors,
                               std::vector<MarginalTable> clique_marginals)
    : tree_(std::move(tree)),
      variables_(std::move(variables)),
      factors_(std::move(factors)),
      marginals_(std::move(clique_marginals)) {
    if (static_cast<int>(variables_.size()) != tree_.n())
        throw ValidationError("model variable list does not match the structure");
}

const Factor* ProjectedModel::find(VertexSet scope) const {
    for (const auto& f : factors_)
        if (f.scope == scope) return &f;
    return nullptr;
}

ProjectedModel project(const MarginalSource& source, const KTree& tree) {
    if (tree.n() != source.num_vars())
        throw ValidationError("structure has " + std::to_string(tree.n()) + " vertices but the data has " +
                              std::to_string(source.num_vars()) + " variables");

    const auto cliques = all_cliques(tree);
    std::vector<Factor> factors;
    std::vector<MarginalTable> marginals;
    factors.reserve(cliques.size());

    auto factor_of = [&](VertexSet s) -> const Factor& {
        for (const auto& f : factors)
            if (f.scope == s) return f;
        throw InternalError("missing sub-clique factor " + s.to_string());
    };

    for (VertexSet h : cliques) {
        MarginalTable m = source.marginal(h);
        Factor f{h, m.arities(), std::vector<double>(m.size(), 0.0)};
        const auto members = h.members();

        // Sub-factors and, for each, the positions of its members inside h.
        struct Sub {
            const Factor* factor;
            std::vector<int> positions;
        };
        std::vector<Sub> subs;
        h.for_each_nonempty_subset([&](VertexSet s) {
            if (s == h) return;
            Sub sub{&factor_of(s), {}};
            for (int v : s.members())
                sub.positions.push_back(static_cast<int>(std::find(members.begin(), members.end(), v) - members.begin()));
            subs.push_back(std::move(sub));
        });

        std::vector<int> local(members.size());
        for (std::size_t c = 0; c < m.size(); ++c) {
            const double p = m[c];
            if (p == 0.0) continue;
            decode(c, f.arities, local);
            double denom = 1.0;
            for (const auto& sub : subs) {
                std::size_t idx = 0;
                for (std::size_t i = 0; i < sub.positions.size(); ++i)
                    idx = idx * sub.factor->arities[i] + local[sub.positions[i]];
                denom *= sub.factor->values[idx];
            }
            if (denom == 0.0)
                throw InternalError("inconsistent marginals: positive cell over a zero sub-factor in " + h.to_string());
            f.values[c] = p / denom;
        }
        factors.push_back(std::move(f));
        marginals.push_back(std::move(m));
    }
    return ProjectedModel(tree, variables_of(source), std::move(factors), std::move(marginals));
}

double model_log_prob(const ProjectedModel& model, std::span<const int> x) {
    const auto& vars = model.variables();
    if (x.size() != vars.size()) throw ValidationError("assignment has the wrong number of variables");
    for (std::size_t v = 0; v < vars.size(); ++v)
        if (x[v] < 0 || x[v] >= vars[v].arity)
            throw ValidationError("assignment value " + std::to_string(x[v]) + " outside arity of '" + vars[v].name + "'");

    double total = 0.0;
    for (const auto& f : model.factors()) {
        const double phi = f.values[f.cell(x)];
        if (phi == 0.0) return kImpossible;
        total += std::log(phi);
    }
    return total;
}

std::vector<double> model_joint(const ProjectedModel& model) {
    const auto& vars = model.variables();
    std::uint64_t cells = 1;
    for (const auto& v : vars) {
        cells *= static_cast<std::uint64_t>(v.arity);
        if (cells > kMaxEnumerableJoint) throw GuardError("joint space exceeds 2^20 cells");
    }
    std::vector<double> out(cells, 0.0);
    std::vector<int> x(vars.size(), 0);
    for (std::size_t c = 0; c < cells; ++c) {
        const double lp = model_log_prob(model, x);
        out[c] = is_impossible(lp) ? 0.0 : std::exp(lp);
        for (std::size_t v = vars.size(); v-- > 0;) {
            if (++x[v] < vars[v].arity) break;
            x[v] = 0;
        }
    }
    return out;
}

double divergence_to_independent(const MarginalSource& source) {
    double total = 0.0;
    for (int v = 0; v < source.num_vars(); ++v) total += source.entropy(VertexSet::single(v));
    return total - source.joint_entropy();
}

double divergence_decomposed(const MarginalSource& source, const WeightFunction& wf, const KTree& tree) {
    if (wf.n() != source.num_vars()) throw ValidationError("weight function and data disagree on n");
    return divergence_to_independent(source) - score(tree, wf);
}

double divergence_direct(const MarginalSource& source, const ProjectedModel& model) {
    if (source.num_vars() != static_cast<int>(model.variables().size()))
        throw ValidationError("model and data disagree on the number of variables");
    if (source.joint_space_size() > kMaxEnumerableJoint)
        throw GuardError("joint space exceeds 2^20 cells; direct divergence not enumerable");
    double total = 0.0;
    source.for_each_support_point([&](std::span<const int> x, double p) {
        const double lq = model_log_prob(model, x);
        if (is_impossible(lq)) throw InternalError("target support point has zero model probability");
        total += p * (std::log(p) - lq);
    });
    return total;
}

double log_likelihood(const ProjectedModel& model, const Dataset& data) {
    check_shared_variables(model, data);
    const auto rows = static_cast<long long>(data.num_rows());
    std::vector<double> per_row(static_cast<std::size_t>(rows));
    bool impossible = false;
#pragma omp parallel for schedule(static) reduction(|| : impossible)
    for (long long r = 0; r < rows; ++r) {
        const double lp = model_log_prob(model, data.row(r));
        if (is_impossible(lp)) {
            impossible = true;
            per_row[r] = 0.0;
        } else {
            per_row[r] = lp * static_cast<double>(data.multiplicity(r));
        }
    }
    if (impossible) return kImpossible;
    return pairwise_sum(per_row);
}

namespace serial {

double log_likelihood(const ProjectedModel& model, const Dataset& data) {
    check_shared_variables(model, data);
    double total = 0.0;
    for (std::size_t r = 0; r < data.num_rows(); ++r) {
        const double lp = model_log_prob(model, data.row(r));
        if (is_impossible(lp)) return kImpossible;
        total += lp * static_cast<double>(data.multiplicity(r));
    }
    return total;
}

}  // namespace serial

}  // namespace hypertree
