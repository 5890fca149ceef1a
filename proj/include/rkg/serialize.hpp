#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "rkg/coupling.hpp"
#include "rkg/exactmath.hpp"
#include "rkg/experiment.hpp"
#include "rkg/graphalgo.hpp"
#include "rkg/model.hpp"
#include "rkg/sampler.hpp"

namespace rkg {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// ModelParams as flat key/value text:
//
//   # comment
//   n = 1000
//   P = 10000
//   a = 0.5,0.5
//   K = 20,40
//
// m is optional and inferred from K when absent. Unknown keys are errors.
ModelParams params_from_config(const std::string& text);
std::string params_to_config(const ModelParams& params);

// ModelParams as JSON: {"n": 1000, "m": 2, "P": 10000, "a": [0.5, 0.5], "K": [20, 40]}
nlohmann::json to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& j);

/// Comma-separated list parsers used by the config format and the CLI.
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::int64_t> parse_int_list(const std::string& text);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const ScalingReport& report);
nlohmann::json to_json(const ComponentSummary& summary);
nlohmann::json to_json(const CouplingResult& result);
nlohmann::json to_json(const TrialAggregate& row);
nlohmann::json to_json(const ThresholdResult& result);

// GraphSample text format, one node per line after the header; groups are
// written 1-based:
//
//   rkg-sample v1 n=3 m=2 P=10
//   0 1 2 7
//   1 2 0 3 9
//   2 1 4 5
//
// Each node line is "<node id> <group> <key id>...". Lines starting with '#'
// are ignored.
struct SampleFile {
  std::int64_t n = 0;
  int m = 0;
  std::int64_t P = 0;
  GraphSample sample;
};

void write_sample(std::ostream& os, const GraphSample& sample, const ModelParams& params);
SampleFile read_sample(std::istream& is);

}  // namespace rkg
