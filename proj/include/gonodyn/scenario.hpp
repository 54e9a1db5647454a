#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "gonodyn/analysis.hpp"
#include "gonodyn/operators.hpp"

namespace gonodyn {

// Run parameters shared by simulate / omega / sweep.
struct RunOptions {
  long steps = 1000;        // simulate row count
  OmegaOptions omega;       // omega-limit estimation knobs
  std::uint64_t seed = 1;
};

using InitialState = std::variant<FullState, ReducedState, NormalizedState>;

// A fully resolved scenario: operator, optional initial state, run options.
// File indices are 1-based (matching the usual notation) and converted here.
struct ScenarioConfig {
  GonosomalOperator op;
  std::optional<InitialState> initial;
  RunOptions run;
  std::string tensor_family;        // "", "C1", "C2", "C3" or "U"
  std::optional<UOperator> u_op;    // set for family U
  std::optional<double> c3_c;       // set for family C3

  int size() const { return op.size(); }
  // Initial state converted to the requested coordinate level.
  NormalizedState initial_normalized() const;
  FullState initial_full() const;
  ReducedState initial_reduced() const;
};

// Throws std::runtime_error on unreadable files and nlohmann parse errors
// on malformed JSON (CLI exit 2); semantic problems surface as gonodyn::Error
// from scenario_from_json (CLI exit 1).
nlohmann::json load_json_file(const std::filesystem::path& path);

ScenarioConfig scenario_from_json(const nlohmann::json& doc);

struct ValidationIssue {
  std::string where;
  std::string message;
};

struct ScenarioValidation {
  bool pass = false;
  std::vector<ValidationIssue> issues;
  std::optional<TensorValidationReport> tensor_report;
};

// Collects every invariant violation instead of stopping at the first.
// Structural problems (missing keys, wrong JSON types) still throw.
ScenarioValidation validate_scenario_json(const nlohmann::json& doc);

}  // namespace gonodyn
