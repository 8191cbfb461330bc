#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "hypertree/paritygen.hpp"
#include "hypertree/projection.hpp"
#include "hypertree/solvers.hpp"
#include "hypertree/structure.hpp"
#include "hypertree/weights.hpp"

namespace hypertree::io {

using json = nlohmann::json;

enum class LogBase { E, Two };

LogBase log_base_from_string(const std::string& name);
std::string to_string(LogBase base);
// Converts a value in nats to the display base.
double in_base(double nats, LogBase base);

// {"k","n","log_base","weights":[{"vars":[...],"w":x}]}, ordered by size then
// lexicographically.
json weights_to_json(const WeightFunction& wf, LogBase base = LogBase::E);
// Subsets absent from the file get weight 0. Values are returned in nats.
WeightFunction weights_from_json(const json& j);

// {"k","n","seed","attachments":[{"v","anchor"}],"maximal_cliques"}; the
// maximal cliques are derived output and ignored on input.
json structure_to_json(const KTree& tree);
KTree structure_from_json(const json& j);

// Structure JSON plus {"score","method","stats":{"nodes","iterations"}}.
json solver_result_to_json(const SolverResult& result);

// Structure JSON plus {"variables","factors":[{"vars","table"}]}. Zero-factor
// cells hold 0; the "-inf" string is used for impossible log values.
json model_to_json(const ProjectedModel& model);

// Log-probability as JSON in the display base, with kImpossible written as
// "-inf".
json log_value(double v, LogBase base = LogBase::E);

// {"k","n","Q","biases":[{"vars","p"}]}; omitted sets have p = 0.
json biases_to_json(const TargetBiases& biases);
TargetBiases biases_from_json(const json& j);

// {"k","n","Q_grid","targets":[{"vars","w"}]} -> (n, k, q_grid, targets keyed
// by vertex bitmask).
struct WeightTargets {
    int n = 0;
    int k = 0;
    std::int64_t q_grid = 1000;
    std::map<std::uint64_t, double> targets;
};
WeightTargets targets_from_json(const json& j);

json realized_to_json(const RealizedBiases& realized);
json provenance_to_json(const ParitySample& sample);

// Reads a whole file; throws IoError naming the path.
std::string read_file(const std::string& path);
json read_json_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace hypertree::io
