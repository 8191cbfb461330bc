#include "hypertree/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hypertree/errors.hpp"

namespace hypertree::io {

namespace {

VertexSet vars_of(const json& j, int n) {
    VertexSet s;
    for (const auto& v : j) {
        const int x = v.get<int>();
        if (x < 0 || x >= n) throw ValidationError("vertex " + std::to_string(x) + " outside [0, " + std::to_string(n) + ")");
        if (s.contains(x)) throw ValidationError("vertex " + std::to_string(x) + " repeated in a set");
        s = s.with(x);
    }
    return s;
}

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

LogBase log_base_from_string(const std::string& name) {
    if (name == "e") return LogBase::E;
    if (name == "2") return LogBase::Two;
    throw ValidationError("log base must be \"e\" or \"2\", got \"" + name + "\"");
}

std::string to_string(LogBase base) { return base == LogBase::E ? "e" : "2"; }

double in_base(double nats, LogBase base) { return base == LogBase::E ? nats : nats / std::log(2.0); }

json weights_to_json(const WeightFunction& wf, LogBase base) {
    json entries = json::array();
    for (int s = 1; s <= wf.k() + 1; ++s) {
        auto sets = subsets_of_size(wf.n(), s);
        std::sort(sets.begin(), sets.end(), VertexSet::lex_less);
        for (VertexSet h : sets) entries.push_back({{"vars", h.members()}, {"w", in_base(wf.at(h), base)}});
    }
    return {{"k", wf.k()}, {"n", wf.n()}, {"log_base", to_string(base)}, {"weights", entries}};
}

WeightFunction weights_from_json(const json& j) {
    return guarded("weights file", [&] {
        const LogBase base =
            j.contains("log_base") ? log_base_from_string(j.at("log_base").get<std::string>()) : LogBase::E;
        const double to_nats = base == LogBase::E ? 1.0 : std::log(2.0);
        const int n = j.at("n").get<int>();
        const int k = j.at("k").get<int>();
        if (k < 1 || k > n - 1) throw ValidationError("weights file has k outside [1, n-1]");
        WeightFunction wf(n, k);
        for (const auto& e : j.at("weights")) {
            const VertexSet h = vars_of(e.at("vars"), n);
            if (h.size() < 1 || h.size() > k + 1)
                throw ValidationError("weight entry " + h.to_string() + " has size outside [1, k+1]");
            wf.set(h, e.at("w").get<double>() * to_nats);
        }
        return wf;
    });
}

json structure_to_json(const KTree& tree) {
    json attachments = json::array();
    for (const auto& a : tree.attachments()) attachments.push_back({{"v", a.vertex}, {"anchor", a.anchor.members()}});
    json cliques = json::array();
    for (VertexSet c : tree.maximal_cliques()) cliques.push_back(c.members());
    return {{"k", tree.k()},
            {"n", tree.n()},
            {"seed", tree.seed().members()},
            {"attachments", attachments},
            {"maximal_cliques", cliques}};
}

KTree structure_from_json(const json& j) {
    return guarded("structure file", [&] {
        const int n = j.at("n").get<int>();
        const int k = j.at("k").get<int>();
        if (n < 1 || n > kMaxVertices) throw ValidationError("structure n outside [1, 64]");
        std::vector<Attachment> attachments;
        for (const auto& a : j.at("attachments")) attachments.push_back({a.at("v").get<int>(), vars_of(a.at("anchor"), n)});
        return KTree(n, k, vars_of(j.at("seed"), n), std::move(attachments));
    });
}

json solver_result_to_json(const SolverResult& result) {
    json out = structure_to_json(result.tree);
    out["score"] = result.score;
    out["method"] = to_string(result.method);
    json stats = {{"nodes", result.stats.nodes}, {"iterations", result.stats.iterations}};
    if (result.stats.runner_up_score) stats["runner_up_score"] = *result.stats.runner_up_score;
    out["stats"] = stats;
    return out;
}

json log_value(double v, LogBase base) {
    if (is_impossible(v)) return "-inf";
    return in_base(v, base);
}

json model_to_json(const ProjectedModel& model) {
    json out = structure_to_json(model.tree());
    json vars = json::array();
    for (const auto& v : model.variables()) vars.push_back({{"name", v.name}, {"arity", v.arity}});
    json factors = json::array();
    for (const auto& f : model.factors()) factors.push_back({{"vars", f.scope.members()}, {"table", f.values}});
    out["variables"] = vars;
    out["factors"] = factors;
    return out;
}

json biases_to_json(const TargetBiases& biases) {
    json entries = json::array();
    const auto sets = subsets_of_size(biases.n(), biases.k() + 1);
    for (std::size_t i = 0; i < sets.size(); ++i)
        entries.push_back({{"vars", sets[i].members()}, {"p", biases.numerators()[i]}});
    return {{"k", biases.k()}, {"n", biases.n()}, {"Q", biases.q()}, {"biases", entries}};
}

TargetBiases biases_from_json(const json& j) {
    return guarded("biases file", [&] {
        const int n = j.at("n").get<int>();
        TargetBiases out(n, j.at("k").get<int>(), j.at("Q").get<std::int64_t>());
        for (const auto& e : j.at("biases")) out.set(vars_of(e.at("vars"), n), e.at("p").get<std::int64_t>());
        return out;
    });
}

WeightTargets targets_from_json(const json& j) {
    return guarded("targets file", [&] {
        WeightTargets out;
        out.n = j.at("n").get<int>();
        out.k = j.at("k").get<int>();
        if (out.n < 1 || out.n > kMaxVertices) throw ValidationError("targets n outside [1, 64]");
        if (j.contains("Q_grid")) out.q_grid = j.at("Q_grid").get<std::int64_t>();
        for (const auto& e : j.at("targets")) out.targets[vars_of(e.at("vars"), out.n).bits()] = e.at("w").get<double>();
        return out;
    });
}

json realized_to_json(const RealizedBiases& realized) {
    json out = biases_to_json(realized.biases);
    out["scale"] = realized.scale;
    out["margin"] = realized.margin;
    out["errors"] = realized.errors;
    out["total_error"] = realized.total_error;
    return out;
}

json provenance_to_json(const ParitySample& sample) {
    json blocks = json::array();
    for (const auto& b : sample.blocks)
        blocks.push_back({{"vars", b.target.members()},
                          {"uniform_blocks", b.uniform_blocks},
                          {"parity_blocks", b.parity_blocks}});
    return {{"n", sample.dataset.num_vars()},
            {"rows_per_block", sample.rows_per_block},
            {"total_rows", sample.dataset.sample_size()},
            {"block_order", "per target set: uniform blocks, then parity-fixed blocks (odd slice written twice)"},
            {"blocks", blocks}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace hypertree::io
