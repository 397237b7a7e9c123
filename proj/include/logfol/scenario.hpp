#pragma once

#include "logfol/foliation.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace logfol {

using Json = nlohmann::ordered_json;

/// Parse failure carrying every violation found, not just the first.
struct ScenarioError : std::runtime_error {
  std::vector<std::string> violations;

  explicit ScenarioError(std::vector<std::string> v);
};

struct CheckRequest {
  std::string name;
  Json params;  // object; may be empty
};

/// A scenario file: the foliation datum plus the checks to run on it.
struct Scenario {
  std::string name;
  int n = 0;
  std::uint64_t seed = 0;
  PoleSystem poles;
  ResidueTensor tensor{1, 1};
  Json tolerances = Json::object();  // optional overrides, forwarded to the checks
  std::vector<CheckRequest> checks;

  LogFoliationSpec spec() const { return LogFoliationSpec(poles, tensor); }
};

Scenario parse_scenario(const Json& j);
Scenario parse_scenario_file(const std::string& path);
Json scenario_to_json(const Scenario& s);

/// Serialization helpers (1-based tuples in files, 0-based in memory).
Json poly_to_json(const MultiPoly& f);
MultiPoly poly_from_json(const Json& j, int nvars);
Json tensor_to_json(const ResidueTensor& t);
ResidueTensor tensor_from_json(const Json& j, int r);

struct CheckResult {
  std::string status;  // "pass" | "fail" | "error"
  Json details;
};

using CheckFn = std::function<CheckResult(const Scenario&, const CheckRequest&, std::uint64_t seed)>;

/// Name -> implementation for every runnable check.
const std::map<std::string, CheckFn>& check_registry();

/// Runs every requested check (independent checks run concurrently) and
/// assembles the deterministic report; results are sorted by check name.
Json run_scenario(const Scenario& s);

/// Built-in reproductions: "p3-planes", "rational-fibration",
/// "perturbation-family".
Scenario builtin_example(const std::string& name);

std::vector<std::string> builtin_example_names();

}  // namespace logfol
