#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hypertree/dataset.hpp"
#include "hypertree/errors.hpp"
#include "hypertree/io.hpp"
#include "hypertree/paritygen.hpp"
#include "hypertree/projection.hpp"
#include "hypertree/solvers.hpp"
#include "hypertree/structure.hpp"
#include "hypertree/weights.hpp"

namespace hypertree::cli {

namespace {

using io::json;
using io::LogBase;

struct RunConfig {
    std::string data_path;
    std::string second_path;
    std::string arities_path;
    std::string out_path;
    std::string provenance_path;
    std::string solver = "exact";
    std::string display_base = "e";
    int k = 1;
    int exact_limit = 0;
    int max_iters = 1000;
    int parity_limit = kDefaultParityVertexLimit;
};

Dataset read_data(const RunConfig& cfg) {
    ArityOverrides overrides;
    if (!cfg.arities_path.empty()) overrides = parse_arity_sidecar(io::read_file(cfg.arities_path));
    return load_dataset_file(cfg.data_path, overrides);
}

void emit(const RunConfig& cfg, const json& doc, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << doc.dump(2) << '\n';
    } else {
        io::write_file(cfg.out_path, doc.dump(2) + "\n");
    }
}

bool is_json_path(const std::string& path) { return std::filesystem::path(path).extension() == ".json"; }

void validate_k(int k) {
    if (k < 1) throw ValidationError("--k must be >= 1");
}

void cmd_weights(const RunConfig& cfg, std::ostream& out) {
    validate_k(cfg.k);
    const Dataset data = read_data(cfg);
    const WeightFunction wf = compute_weights(data, cfg.k);
    emit(cfg, io::weights_to_json(wf, io::log_base_from_string(cfg.display_base)), out);
}

SolverResult solve(const WeightFunction& wf, const RunConfig& cfg) {
    switch (solver_method_from_string(cfg.solver)) {
        case SolverMethod::ChowLiu:
            if (wf.k() != 1) throw ValidationError("chow_liu requires --k 1");
            return chow_liu(wf);
        case SolverMethod::Exact: {
            ExactOptions options;
            options.max_vertices = cfg.exact_limit;
            return exact_search(wf, options);
        }
        case SolverMethod::Greedy:
            return greedy(wf);
        case SolverMethod::LocalSearch: {
            if (cfg.max_iters < 0) throw ValidationError("--max-iters must be >= 0");
            const SolverResult start = greedy(wf);
            return local_search(wf, start.tree, {cfg.max_iters});
        }
    }
    throw InternalError("unhandled solver");
}

void cmd_learn(const RunConfig& cfg, std::ostream& out) {
    validate_k(cfg.k);
    if (cfg.exact_limit < 0) throw ValidationError("--exact-limit must be >= 0");
    const LogBase base = io::log_base_from_string(cfg.display_base);

    std::optional<Dataset> data;
    std::optional<WeightFunction> wf;
    if (is_json_path(cfg.data_path)) {
        wf = io::weights_from_json(io::read_json_file(cfg.data_path));
        if (wf->k() != cfg.k)
            throw ValidationError("weights file has k=" + std::to_string(wf->k()) + " but --k is " +
                                  std::to_string(cfg.k));
    } else {
        data = read_data(cfg);
        wf = compute_weights(*data, cfg.k);
    }

    const SolverResult result = solve(*wf, cfg);
    json doc = io::solver_result_to_json(result);
    doc["score"] = io::in_base(result.score, base);
    if (result.stats.runner_up_score) doc["stats"]["runner_up_score"] = io::in_base(*result.stats.runner_up_score, base);
    if (data) {
        doc["divergence_decomposed"] = io::in_base(divergence_decomposed(*data, *wf, result.tree), base);
    } else {
        doc["divergence_decomposed"] = nullptr;
        doc["divergence_note"] = "weights-only input; no data to measure divergence against";
    }
    doc["log_base"] = io::to_string(base);
    emit(cfg, doc, out);
}

void cmd_eval(const RunConfig& cfg, std::ostream& out) {
    const LogBase base = io::log_base_from_string(cfg.display_base);
    const Dataset data = read_data(cfg);
    const KTree tree = io::structure_from_json(io::read_json_file(cfg.second_path));
    if (tree.n() != data.num_vars())
        throw ValidationError("structure has " + std::to_string(tree.n()) + " vertices but the data has " +
                              std::to_string(data.num_vars()) + " variables");

    const int n = data.num_vars();
    const int k = std::min(tree.k(), n - 1);
    const ProjectedModel model = project(data, tree);
    const double loglik = log_likelihood(model, data);
    const double t = static_cast<double>(data.sample_size());

    json doc = {{"k", tree.k()}, {"n", n}, {"log_base", io::to_string(base)}, {"rows", data.sample_size()}};
    double d_decomposed = divergence_to_independent(data);
    if (k >= 1) {
        const WeightFunction wf = compute_weights(data, k);
        const double s = score(tree, wf);
        d_decomposed -= s;
        doc["score"] = io::in_base(s, base);
    } else {
        doc["score"] = 0.0;
    }
    doc["D_decomposed"] = io::in_base(d_decomposed, base);
    doc["loglik_per_row"] = io::log_value(loglik / t, base);

    if (data.joint_space_size() <= kMaxEnumerableJoint) {
        const double d_direct = divergence_direct(data, model);
        doc["D_direct"] = io::in_base(d_direct, base);
        doc["identity_residual"] = io::in_base(std::abs(d_direct - d_decomposed), base);
    } else {
        doc["D_direct"] = nullptr;
        doc["identity_residual"] = nullptr;
        doc["D_direct_note"] = "not enumerable: joint space exceeds 2^20 cells";
    }
    emit(cfg, doc, out);
}

void cmd_gen_parity(const RunConfig& cfg) {
    if (cfg.out_path.empty()) throw ValidationError("gen-parity needs --out for the sample CSV");
    if (cfg.parity_limit < 1) throw ValidationError("--max-vars must be >= 1");
    const json input = io::read_json_file(cfg.data_path);

    std::optional<TargetBiases> biases;
    json provenance;
    if (input.contains("targets")) {
        const io::WeightTargets targets = io::targets_from_json(input);
        const RealizedBiases realized = realize_weights(targets.n, targets.k, targets.targets, targets.q_grid);
        biases = realized.biases;
        provenance["realized"] = io::realized_to_json(realized);
    } else if (input.contains("biases")) {
        biases = io::biases_from_json(input);
    } else {
        throw ValidationError(cfg.data_path + ": expected a \"biases\" or \"targets\" document");
    }

    const ParitySample sample = generate(*biases, cfg.parity_limit);
    {
        std::ofstream csv(cfg.out_path, std::ios::binary);
        if (!csv) throw IoError("cannot write '" + cfg.out_path + "'");
        write_parity_csv(csv, sample);
        if (!csv) throw IoError("write to '" + cfg.out_path + "' failed");
    }

    json sample_info = io::provenance_to_json(sample);
    sample_info["k"] = biases->k();
    sample_info["Q"] = biases->q();
    sample_info["biases"] = io::biases_to_json(*biases)["biases"];
    provenance["sample"] = sample_info;
    provenance["csv"] = cfg.out_path;
    const std::string prov_path =
        cfg.provenance_path.empty() ? cfg.out_path + ".provenance.json" : cfg.provenance_path;
    io::write_file(prov_path, provenance.dump(2) + "\n");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Bounded tree-width Markov network learning"};
    app.name("hypertree");
    app.require_subcommand(1);

    auto add_base = [&](CLI::App* sub) {
        sub->add_option("--display-base", cfg.display_base, "Log base for reported values")
            ->check(CLI::IsMember({"e", "2"}));
    };
    auto add_out = [&](CLI::App* sub, const char* what) { sub->add_option("--out", cfg.out_path, what); };
    auto add_arities = [&](CLI::App* sub) {
        sub->add_option("--arities", cfg.arities_path, "JSON sidecar {\"arities\": {name: m}}");
    };

    auto* weights = app.add_subcommand("weights", "Clique weights for all subsets up to size k+1");
    weights->add_option("data", cfg.data_path, "CSV of integer outcome codes")->required();
    weights->add_option("--k", cfg.k, "Tree-width")->required();
    add_out(weights, "Write weights JSON here");
    add_arities(weights);
    add_base(weights);

    auto* learn = app.add_subcommand("learn", "Learn a width-k structure from CSV data or a weights file");
    learn->add_option("input", cfg.data_path, "CSV data or weights .json")->required();
    learn->add_option("--k", cfg.k, "Tree-width")->required();
    learn->add_option("--solver", cfg.solver, "chow_liu | exact | greedy | local")
        ->check(CLI::IsMember({"chow_liu", "exact", "greedy", "local", "local_search"}));
    learn->add_option("--exact-limit", cfg.exact_limit, "Largest n for exact search (0: default for k)");
    learn->add_option("--max-iters", cfg.max_iters, "Local search iteration cap");
    add_out(learn, "Write structure JSON and report here");
    add_arities(learn);
    add_base(learn);

    auto* eval = app.add_subcommand("eval", "Evaluate a structure against data");
    eval->add_option("data", cfg.data_path, "CSV data")->required();
    eval->add_option("structure", cfg.second_path, "Structure JSON")->required();
    add_out(eval, "Write report JSON here");
    add_arities(eval);
    add_base(eval);

    auto* parity = app.add_subcommand("gen-parity", "Generate a parity sample from biases or target weights");
    parity->add_option("input", cfg.data_path, "Biases or targets JSON")->required();
    parity->add_option("--out", cfg.out_path, "Sample CSV path")->required();
    parity->add_option("--provenance", cfg.provenance_path, "Provenance JSON path (default <out>.provenance.json)");
    parity->add_option("--max-vars", cfg.parity_limit, "Refuse samples over more variables than this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*weights) cmd_weights(cfg, out);
        else if (*learn) cmd_learn(cfg, out);
        else if (*eval) cmd_eval(cfg, out);
        else if (*parity) cmd_gen_parity(cfg);
        return kOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const GuardError& e) {
        err << "refused: " << e.what() << '\n';
        return kGuard;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace hypertree::cli
