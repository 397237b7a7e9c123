#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logfol/scenario.hpp"

#include <set>

using namespace logfol;

namespace {

Json minimal_scenario() {
  return Json{
      {"schema", "logfol-scenario/1"},
      {"name", "minimal"},
      {"n", 1},
      {"seed", 7},
      {"poles", Json::array({Json{{"poly", Json::array({Json::array({Json::array({1, 0}), "1/1"})})}},
                             Json{{"poly", Json::array({Json::array({Json::array({0, 1}), "1/1"})})}}})},
      {"tensor", Json{{"p", 1}, {"entries", Json::array({Json::array({Json::array({1}), "1/1"}),
                                                         Json::array({Json::array({2}), "-1/1"})})}}},
      {"checks", Json::array({"validate", "is_closed_log"})},
  };
}

}  // namespace

TEST_CASE("minimal scenario parses and runs") {
  Scenario s = parse_scenario(minimal_scenario());
  CHECK(s.n == 1);
  CHECK(s.poles.r() == 2);
  CHECK(s.tensor.p() == 1);
  Json report = run_scenario(s);
  CHECK(report.at("summary").at("pass").get<int>() == 2);
  CHECK(report.at("summary").at("fail").get<int>() == 0);
}

TEST_CASE("parse failures are structured and name the offender") {
  // Tensor index out of range.
  Json bad = minimal_scenario();
  bad["tensor"]["entries"][0][0] = Json::array({3});
  try {
    parse_scenario(bad);
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    REQUIRE(e.violations.size() == 1);
    CHECK(e.violations[0].find("[3]") != std::string::npos);
    CHECK(e.violations[0].find("out of range") != std::string::npos);
  }

  // Duplicate pole polynomial.
  Json dup = minimal_scenario();
  dup["poles"][1] = dup["poles"][0];
  try {
    parse_scenario(dup);
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    bool found = false;
    for (const auto& v : e.violations) found |= v.find("pairwise non-proportional") != std::string::npos;
    CHECK(found);
  }

  // Malformed scalar literal.
  Json lit = minimal_scenario();
  lit["poles"][0]["poly"][0][1] = "not-a-number";
  CHECK_THROWS_AS(parse_scenario(lit), ScenarioError);

  // Unknown check.
  Json chk = minimal_scenario();
  chk["checks"].push_back("no_such_check");
  try {
    parse_scenario(chk);
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    bool found = false;
    for (const auto& v : e.violations) found |= v.find("no_such_check") != std::string::npos;
    CHECK(found);
  }
}

TEST_CASE("scenario serialization round-trips") {
  Scenario s = builtin_example("rational-fibration");
  Json j = scenario_to_json(s);
  Scenario back = parse_scenario(j);
  CHECK(scenario_to_json(back) == j);
  CHECK(back.tensor == s.tensor);
  CHECK(back.poles.product() == s.poles.product());
}

TEST_CASE("reports are deterministic given the seed") {
  Scenario s = builtin_example("rational-fibration");
  Json a = run_scenario(s);
  Json b = run_scenario(s);
  for (Json* r : {&a, &b})
    for (auto& check : (*r)["checks"]) check["duration_ms"] = 0.0;
  CHECK(a.dump() == b.dump());
}

TEST_CASE("individual check errors are recorded and the run continues") {
  // first_integral demands r = p + 1; the minimal spec has r = 2, p = 1,
  // which qualifies, so force a failure with a non-matching expectation
  // instead, and an error with a check whose precondition breaks.
  Json j = minimal_scenario();
  j["checks"] = Json::array({"is_closed_log",
                             Json{{"check", "line_singularities"}, {"params", Json{{"all", true}}}}});
  Scenario s = parse_scenario(j);
  Json report = run_scenario(s);  // line counting needs n = 3: recorded error
  CHECK(report.at("summary").at("error").get<int>() == 1);
  CHECK(report.at("summary").at("pass").get<int>() == 1);
  bool found = false;
  for (const auto& check : report.at("checks"))
    if (check.at("status") == "error") {
      found = true;
      CHECK(check.at("details").at("message").get<std::string>().find("n = 3") != std::string::npos);
    }
  CHECK(found);
}

TEST_CASE("every registered check is exercised by some built-in scenario") {
  std::set<std::string> used;
  for (const auto& name : builtin_example_names())
    for (const auto& check : builtin_example(name).checks) used.insert(check.name);
  for (const auto& [name, fn] : check_registry()) {
    INFO("check not reachable from any builtin: ", name);
    CHECK(used.count(name) == 1);
  }
}

TEST_CASE("builtin names are stable") {
  CHECK(builtin_example_names() ==
        std::vector<std::string>{"p3-planes", "rational-fibration", "perturbation-family"});
  CHECK_THROWS_AS(builtin_example("nope"), std::invalid_argument);
}
