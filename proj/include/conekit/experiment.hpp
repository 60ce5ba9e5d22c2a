#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "conekit/measures.hpp"

namespace conekit {

inline constexpr const char* kVersion = "0.1.0";

/// A configured run. Serialized flat: {"command": ..., "seed": ...,
/// "workers": ..., <parameters>}.
struct ExperimentSpec {
  std::string command;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  nlohmann::json params = nlohmann::json::object();

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

const std::vector<std::string>& experiment_commands();
/// Every parameter key accepted by some command, sorted.
const std::vector<std::string>& experiment_parameters();
/// Whether the command draws random numbers (and so needs a seed).
bool needs_seed(const std::string& command, const nlohmann::json& params);

nlohmann::json to_json(const ExperimentSpec& spec);
/// Throws InvalidArgument naming the offending key.
ExperimentSpec spec_from_json(const nlohmann::json& j);
/// Parses a config document (empty text = {}), applies `overrides` on top and
/// validates. Errors read "<origin>:<line>:<column>: ..." for keys found in
/// the document and "--<key>: ..." for overridden keys.
ExperimentSpec parse_spec(const std::string& text, const std::string& origin = "config",
                          const nlohmann::json& overrides = nlohmann::json::object());

struct NamedEstimate {
  std::string name;
  Estimate estimate;

  friend bool operator==(const NamedEstimate&, const NamedEstimate&) = default;
};

struct NamedValue {
  std::string name;
  double value = 0.0;

  friend bool operator==(const NamedValue&, const NamedValue&) = default;
};

/// One identity check. Passes when sigma <= threshold and violations == 0.
struct Check {
  std::string name;
  double lhs = 0.0;
  double lhs_std_error = 0.0;
  double rhs = 0.0;
  double rhs_std_error = 0.0;
  double sigma = 0.0;
  double threshold = 4.0;
  std::uint64_t violations = 0;
  bool passed = false;

  friend bool operator==(const Check&, const Check&) = default;
};

struct Report {
  nlohmann::json spec;
  std::string version = kVersion;
  std::string generator;
  std::vector<NamedEstimate> estimates;
  std::vector<NamedValue> formulas;
  std::vector<Check> checks;
  std::map<std::string, std::uint64_t> counters;
  nlohmann::json data = nlohmann::json::object();
  /// Kept out of the JSON unless requested so that reruns are byte-identical.
  std::optional<double> wall_seconds;

  bool all_passed() const;
  /// Discarded fraction over counters "discarded" / ("accepted" + "discarded").
  double discard_rate() const;

  friend bool operator==(const Report&, const Report&) = default;
};

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

/// Dispatches to the library. Library errors propagate unchanged.
Report run(const ExperimentSpec& spec);

/// Exit status: 0 pass, 1 check failure, 3 degenerate (discard rate above
/// 1e-4). Usage errors (2) are decided by the caller.
int exit_status(const Report& r);

/// Pretty JSON with a trailing newline.
std::string emit_json(const Report& r);
/// Header "name,value,std_error,n,seed" and one row per estimate.
std::string emit_csv(const Report& r);
/// Human-readable summary.
std::string emit_table(const Report& r);

}  // namespace conekit
