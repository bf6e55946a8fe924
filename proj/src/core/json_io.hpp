#pragma once

#include <string>

#include "json.hpp"

#include "core/engine.hpp"

namespace spi {

using Json = nlohmann::ordered_json;

// All parsers throw Error{parse} on malformed input and forward argument
// errors from the constructors they call.

// {"kind":"modular"|"coverage"|"cut"|"table"|"budget_additive", "n":..., ...}
SetFunction function_from_json(const Json& j);
// {"kind":"uniform"|"partition"|"graphic"|"matching"|"knapsack"|"explicit",...}
ConstraintFamily constraint_from_json(const Json& j);
// {"days":[{"support":[...],"probs":[...]},...],"constraint":{...},
//  "objective":{...}}.  Omitted supports are assigned consecutively in day
// order; "n" fields of the constraint and objective default to the implied
// sizes.
SpiInstance instance_from_json(const Json& j);

// Experiment configuration; the instance must be inline under "instance".
struct ParsedExperiment {
  SpiInstance instance;
  ExperimentConfig config;
};
ParsedExperiment experiment_from_json(const Json& j);

Json report_to_json(const ExperimentReport& r);
Json transcript_to_json(const RoundingTranscript& t);
std::string trace_to_csv(const std::vector<TrajectoryPoint>& trace);

Json parse_json(const std::string& text);
Json load_json_file(const std::string& path);

}  // namespace spi
