#include "logfol/residue.hpp"
#include "logfol/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using logfol::Json;

// Exit codes: 0 all checks passed, 1 at least one check failed or errored,
// 2 invalid input.
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInvalidInput = 2;

void write_report(const Json& report, const std::string& out_path) {
  if (out_path.empty()) return;
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write report to " + out_path);
  out << report.dump(2) << "\n";
}

int summarize(const Json& report, const std::string& out_path) {
  write_report(report, out_path);
  for (const auto& check : report.at("checks")) {
    std::cout << "[" << check.at("status").get<std::string>() << "] "
              << check.at("name").get<std::string>();
    if (check.contains("details") && check.at("details").contains("message"))
      std::cout << " — " << check.at("details").at("message").get<std::string>();
    std::cout << "\n";
  }
  const Json& s = report.at("summary");
  std::cout << s.at("pass").get<int>() << " passed, " << s.at("fail").get<int>() << " failed, "
            << s.at("error").get<int>() << " errored of " << s.at("total").get<int>() << " checks\n";
  return (s.at("fail").get<int>() + s.at("error").get<int>()) == 0 ? kOk : kCheckFailed;
}

int run_check(const std::string& path, std::uint64_t seed, bool seed_set, const std::string& out_path) {
  logfol::Scenario s = logfol::parse_scenario_file(path);
  if (seed_set) s.seed = seed;
  return summarize(logfol::run_scenario(s), out_path);
}

int run_example(const std::string& name, const std::string& out_path, const std::string& scenario_path) {
  logfol::Scenario s = logfol::builtin_example(name);
  if (!scenario_path.empty()) {
    std::ofstream out(scenario_path);
    if (!out) throw std::runtime_error("cannot write scenario to " + scenario_path);
    out << logfol::scenario_to_json(s).dump(2) << "\n";
  }
  return summarize(logfol::run_scenario(s), out_path);
}

int run_decompose(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tensor file: " + path);
  Json j;
  in >> j;
  int r = j.at("r").get<int>();
  logfol::ResidueTensor t = logfol::tensor_from_json(j, r);

  auto defects = logfol::plucker_defects(t);
  if (!defects.empty()) {
    std::cout << "not decomposable: " << defects.size() << " nonzero obstruction(s)\n";
    for (std::size_t i = 0; i < defects.size() && i < 10; ++i)
      std::cout << "  " << logfol::format_scalar(defects[i]) << "\n";
    return kCheckFailed;
  }
  logfol::Decomposition d = logfol::decompose(t);
  std::cout << "decomposable; scale = " << logfol::format_scalar(d.scale) << "\n";
  for (std::size_t k = 0; k < d.covectors.size(); ++k) {
    std::cout << "  alpha_" << k + 1 << " =";
    for (const auto& c : d.covectors[k].coords) std::cout << " " << logfol::format_scalar(c);
    std::cout << "\n";
  }
  return kOk;
}

int run_residue(const std::string& path, const std::string& index_str, std::uint64_t seed, bool seed_set) {
  logfol::Scenario s = logfol::parse_scenario_file(path);
  if (seed_set) s.seed = seed;

  logfol::IndexTuple index;
  std::stringstream ss(index_str);
  std::string tok;
  while (std::getline(ss, tok, ',')) index.push_back(std::stoi(tok) - 1);

  logfol::LogFoliationSpec spec = s.spec();
  Eigen::VectorXcd base = logfol::find_base_point(spec.poles, index, s.seed);
  logfol::TorusCycle cycle = logfol::build_cycle(spec.poles, index, base);
  std::complex<double> recovered = logfol::torus_residue(spec, index, cycle, 64);
  logfol::GaussianRational exact = spec.tensor.entry(index);
  double error = std::abs(recovered - exact.approx());

  std::cout << "I = (" << index_str << ")\n";
  std::cout << "exact     = " << logfol::format_scalar(exact) << "\n";
  std::cout << "recovered = " << recovered.real() << (recovered.imag() < 0 ? " - " : " + ")
            << std::abs(recovered.imag()) << " i\n";
  std::cout << "|error|   = " << error << "  (epsilon = " << cycle.radius << ", N = 64, seed = "
            << s.seed << ")\n";
  return error < 1e-8 ? kOk : kCheckFailed;
}

int run_degree(const std::string& path, std::uint64_t seed, bool seed_set) {
  logfol::Scenario s = logfol::parse_scenario_file(path);
  if (seed_set) s.seed = seed;
  logfol::LogFoliationSpec spec = s.spec();
  int formula = logfol::foliation_degree(spec);
  int restricted = logfol::degree_by_restriction(spec, s.seed);
  std::cout << "degree formula (sum d_j - p - 1) = " << formula << "\n";
  std::cout << "degree by plane restriction      = " << restricted << "\n";
  return formula == restricted ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logfol — logarithmic foliation toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, emit_scenario, example_name, tensor_path, index_str;
  std::uint64_t seed = 0;

  auto* check = app.add_subcommand("check", "run the checks of a scenario file");
  check->add_option("scenario", scenario_path, "scenario JSON file")->required();
  auto* check_seed = check->add_option("--seed", seed, "override the scenario seed");
  check->add_option("--out", out_path, "write the JSON report here");

  auto* example = app.add_subcommand("example", "run a built-in example scenario");
  example->add_option("name", example_name, "p3-planes | rational-fibration | perturbation-family")
      ->required();
  example->add_option("--out", out_path, "write the JSON report here");
  example->add_option("--emit-scenario", emit_scenario, "also write the scenario JSON here");

  auto* decompose = app.add_subcommand("decompose", "decompose a residue tensor file");
  decompose->add_option("tensor", tensor_path, "tensor JSON file {r, p, entries}")->required();

  auto* residue = app.add_subcommand("residue", "recover one numerical residue by quadrature");
  residue->add_option("scenario", scenario_path, "scenario JSON file")->required();
  residue->add_option("--index", index_str, "pole tuple, e.g. 1,2")->required();
  auto* residue_seed = residue->add_option("--seed", seed, "override the scenario seed");

  auto* degree = app.add_subcommand("degree", "compare the degree formula with plane restriction");
  degree->add_option("scenario", scenario_path, "scenario JSON file")->required();
  auto* degree_seed = degree->add_option("--seed", seed, "override the scenario seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(check)) return run_check(scenario_path, seed, !check_seed->empty(), out_path);
    if (app.got_subcommand(example)) return run_example(example_name, out_path, emit_scenario);
    if (app.got_subcommand(decompose)) return run_decompose(tensor_path);
    if (app.got_subcommand(residue)) return run_residue(scenario_path, index_str, seed, !residue_seed->empty());
    if (app.got_subcommand(degree)) return run_degree(scenario_path, seed, !degree_seed->empty());
  } catch (const logfol::ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kInvalidInput;
}
