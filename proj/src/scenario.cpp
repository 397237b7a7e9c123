#include "logfol/scenario.hpp"

#include "logfol/builtins.hpp"
#include "logfol/parallel.hpp"
#include "logfol/prng.hpp"
#include "logfol/residue.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

namespace logfol {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::ostringstream os;
  os << "invalid scenario (" << v.size() << " violation" << (v.size() == 1 ? "" : "s") << "):";
  for (const auto& s : v) os << "\n  - " << s;
  return os.str();
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> v)
    : std::runtime_error(join_violations(v)), violations(std::move(v)) {}

Json poly_to_json(const MultiPoly& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back(Json::array({e, format_scalar(c)}));
  return terms;
}

MultiPoly poly_from_json(const Json& j, int nvars) {
  if (!j.is_array()) throw std::invalid_argument("polynomial: expected a list of [exponents, scalar] pairs");
  MultiPoly f(nvars);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2)
      throw std::invalid_argument("polynomial term: expected [exponent-vector, scalar-literal]");
    ExpVec e = term.at(0).get<ExpVec>();
    if (static_cast<int>(e.size()) != nvars)
      throw std::invalid_argument("polynomial term: exponent vector length != n + 1");
    for (int x : e)
      if (x < 0) throw std::invalid_argument("polynomial term: negative exponent");
    f.add_term(e, parse_scalar(term.at(1).get<std::string>()));
  }
  return f;
}

Json tensor_to_json(const ResidueTensor& t) {
  Json entries = Json::array();
  for (const auto& [idx, c] : t.entries()) {
    IndexTuple one_based;
    for (int i : idx) one_based.push_back(i + 1);
    entries.push_back(Json::array({one_based, format_scalar(c)}));
  }
  return Json{{"p", t.p()}, {"entries", entries}};
}

ResidueTensor tensor_from_json(const Json& j, int r) {
  int p = j.at("p").get<int>();
  ResidueTensor t(r, p);
  for (const auto& entry : j.at("entries")) {
    if (!entry.is_array() || entry.size() != 2)
      throw std::invalid_argument("tensor entry: expected [index-tuple, scalar-literal]");
    IndexTuple one_based = entry.at(0).get<IndexTuple>();
    IndexTuple idx;
    for (int i : one_based) {
      if (i < 1 || i > r)
        throw std::invalid_argument("tensor entry " + entry.at(0).dump() + ": index out of range 1.." +
                                    std::to_string(r));
      idx.push_back(i - 1);
    }
    t.add_entry(idx, parse_scalar(entry.at(1).get<std::string>()));
  }
  return t;
}

Scenario parse_scenario(const Json& j) {
  std::vector<std::string> violations;
  Scenario s;

  if (j.value("schema", "") != "logfol-scenario/1")
    violations.push_back("schema: expected \"logfol-scenario/1\"");
  s.name = j.value("name", "");
  s.n = j.value("n", 0);
  if (s.n < 1) violations.push_back("n: projective dimension must be >= 1");
  s.seed = j.value("seed", std::uint64_t{0});
  s.tolerances = j.value("tolerances", Json::object());

  std::vector<MultiPoly> polys;
  if (!j.contains("poles") || !j.at("poles").is_array() || j.at("poles").empty()) {
    violations.push_back("poles: expected a nonempty list");
  } else if (s.n >= 1) {
    for (std::size_t k = 0; k < j.at("poles").size(); ++k) {
      try {
        polys.push_back(poly_from_json(j.at("poles").at(k).at("poly"), s.n + 1));
      } catch (const std::exception& e) {
        violations.push_back("poles[" + std::to_string(k + 1) + "]: " + e.what());
      }
    }
  }
  if (violations.empty()) {
    try {
      s.poles = make_pole_system(s.n, std::move(polys));
    } catch (const std::exception& e) {
      violations.push_back(std::string("poles: ") + e.what());
    }
  }

  if (!j.contains("tensor")) {
    violations.push_back("tensor: missing");
  } else if (violations.empty()) {
    try {
      s.tensor = tensor_from_json(j.at("tensor"), s.poles.r());
    } catch (const std::exception& e) {
      violations.push_back(std::string("tensor: ") + e.what());
    }
  }

  const auto& registry = check_registry();
  if (j.contains("checks")) {
    if (!j.at("checks").is_array()) {
      violations.push_back("checks: expected a list");
    } else {
      for (std::size_t k = 0; k < j.at("checks").size(); ++k) {
        const Json& cj = j.at("checks").at(k);
        CheckRequest req;
        if (cj.is_string()) {
          req.name = cj.get<std::string>();
          req.params = Json::object();
        } else if (cj.is_object() && cj.contains("check")) {
          req.name = cj.at("check").get<std::string>();
          req.params = cj.value("params", Json::object());
        } else {
          violations.push_back("checks[" + std::to_string(k) + "]: expected a name or {check, params}");
          continue;
        }
        if (!registry.count(req.name))
          violations.push_back("checks[" + std::to_string(k) + "]: unknown check \"" + req.name + "\"");
        s.checks.push_back(std::move(req));
      }
    }
  }

  if (!violations.empty()) throw ScenarioError(std::move(violations));
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ScenarioError({std::string("JSON parse failure: ") + e.what()});
  }
  return parse_scenario(j);
}

Json scenario_to_json(const Scenario& s) {
  Json poles = Json::array();
  for (const auto& f : s.poles.polys) poles.push_back(Json{{"poly", poly_to_json(f)}});
  Json checks = Json::array();
  for (const auto& c : s.checks) {
    if (c.params.empty())
      checks.push_back(Json{{"check", c.name}});
    else
      checks.push_back(Json{{"check", c.name}, {"params", c.params}});
  }
  Json out{{"schema", "logfol-scenario/1"}};
  if (!s.name.empty()) out["name"] = s.name;
  out["n"] = s.n;
  out["seed"] = s.seed;
  out["poles"] = poles;
  out["tensor"] = tensor_to_json(s.tensor);
  if (!s.tolerances.empty()) out["tolerances"] = s.tolerances;
  out["checks"] = checks;
  return out;
}

// ---------------------------------------------------------------------------
// Checks

namespace {

CheckResult pass(Json details = Json::object()) { return {"pass", std::move(details)}; }
CheckResult fail(Json details = Json::object()) { return {"fail", std::move(details)}; }

Json complex_to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

CheckResult check_validate(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  LogFoliationSpec spec = s.spec();
  bool projective = spec.is_projective();
  bool expect = req.params.value("expect_projective", true);
  Json d{{"projective", projective}, {"r", spec.r()}, {"p", spec.p()}, {"n", spec.n()}};
  return projective == expect ? pass(d) : fail(d);
}

CheckResult check_is_logarithmic(const Scenario& s, const CheckRequest&, std::uint64_t) {
  LogFoliationSpec spec = s.spec();
  bool ok = is_logarithmic(expand(spec), spec.poles);
  return ok ? pass() : fail();
}

CheckResult check_is_closed_log(const Scenario& s, const CheckRequest&, std::uint64_t) {
  return is_closed_log(s.spec()) ? pass() : fail();
}

CheckResult check_invariant_poles(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  std::vector<bool> inv = invariant_pole_components(s.spec());
  Json d{{"invariant", inv}};
  if (req.params.contains("expect")) {
    auto expect = req.params.at("expect").get<std::vector<bool>>();
    return inv == expect ? pass(d) : fail(d);
  }
  for (bool b : inv)
    if (!b) return fail(d);
  return pass(d);
}

CheckResult check_foliation_degree(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  int d = foliation_degree(s.spec());
  Json out{{"degree", d}};
  if (req.params.contains("expect") && req.params.at("expect").get<int>() != d) return fail(out);
  return pass(out);
}

CheckResult check_degree_by_restriction(const Scenario& s, const CheckRequest&, std::uint64_t seed) {
  LogFoliationSpec spec = s.spec();
  int formula = foliation_degree(spec);
  int restricted = degree_by_restriction(spec, seed);
  Json d{{"formula", formula}, {"restriction", restricted}};
  return formula == restricted ? pass(d) : fail(d);
}

CheckResult check_integrability_p2(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  IntegrabilityVerdict v = integrability_p2(s.spec());
  Json d{{"tensor_plucker", v.tensor_plucker}, {"symbolic_wedge_zero", v.symbolic_wedge_zero}};
  bool ok = true;
  if (req.params.contains("expect_plucker")) ok &= v.tensor_plucker == req.params.at("expect_plucker").get<bool>();
  if (req.params.contains("expect_wedge_zero"))
    ok &= v.symbolic_wedge_zero == req.params.at("expect_wedge_zero").get<bool>();
  if (!req.params.contains("expect_plucker") && !req.params.contains("expect_wedge_zero"))
    ok = v.tensor_plucker && v.symbolic_wedge_zero;
  return ok ? pass(d) : fail(d);
}

CheckResult check_first_integral(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  FirstIntegral fi = first_integral(s.spec());
  std::vector<int> k;
  for (const auto& [f, kj] : fi.components) k.push_back(kj);
  Json d{{"k", k}};
  if (req.params.contains("expect_k") && req.params.at("expect_k").get<std::vector<int>>() != k)
    return fail(d);
  return pass(d);
}

CheckResult check_is_decomposable(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  bool dec = is_decomposable(s.tensor);
  Json d{{"decomposable", dec}};
  if (req.params.contains("expect")) return dec == req.params.at("expect").get<bool>() ? pass(d) : fail(d);
  return dec ? pass(d) : fail(d);
}

CheckResult check_plucker_defects(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  auto defects = plucker_defects(s.tensor);
  Json list = Json::array();
  for (const auto& v : defects) list.push_back(format_scalar(v));
  Json d{{"count", defects.size()}, {"defects", list}};
  bool empty = defects.empty();
  bool consistent = empty == is_decomposable(s.tensor);
  d["consistent_with_kernel_test"] = consistent;
  if (!consistent) return fail(d);
  if (req.params.contains("expect_empty")) return empty == req.params.at("expect_empty").get<bool>() ? pass(d) : fail(d);
  return pass(d);
}

CheckResult check_decompose(const Scenario& s, const CheckRequest&, std::uint64_t) {
  Decomposition dec = decompose(s.tensor);
  bool ok = dec.scale * wedge_covectors(dec.covectors) == s.tensor;
  Json covs = Json::array();
  for (const auto& c : dec.covectors) {
    Json coords = Json::array();
    for (const auto& x : c.coords) coords.push_back(format_scalar(x));
    covs.push_back(coords);
  }
  Json d{{"scale", format_scalar(dec.scale)}, {"covectors", covs}, {"rewedge_exact", ok}};
  return ok ? pass(d) : fail(d);
}

CheckResult check_decompose_corank2(const Scenario& s, const CheckRequest&, std::uint64_t) {
  Corank2Decomposition dec = decompose_corank2(s.tensor);
  bool ok = wedge_covectors(dec.thetas) == dec.scale * s.tensor;
  Json d{{"scale", format_scalar(dec.scale)}, {"identity_exact", ok}};
  return ok ? pass(d) : fail(d);
}

CheckResult check_radial_kernel(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  int p = req.params.value("p", s.tensor.p());
  auto basis = radial_kernel(s.poles.degrees, s.poles.r(), p);
  Json d{{"dimension", basis.size()}};
  bool member = radial_contraction(s.tensor, s.poles.degrees).is_zero();
  d["tensor_in_kernel"] = member;
  if (req.params.contains("expect_dim") &&
      req.params.at("expect_dim").get<int>() != static_cast<int>(basis.size()))
    return fail(d);
  return member ? pass(d) : fail(d);
}

CheckResult check_expand_degree(const Scenario& s, const CheckRequest&, std::uint64_t) {
  LogFoliationSpec spec = s.spec();
  PolyForm w = expand(spec);  // expand itself verifies coefficient degrees
  int expected = -spec.p();
  for (int dj : spec.poles.degrees) expected += dj;
  Json d{{"coefficient_degree", expected}, {"coefficients", w.coefficients().size()}};
  return pass(d);
}

CheckResult check_line_singularities(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  LogFoliationSpec spec = s.spec();
  Json counts = Json::array();
  bool ok = true;
  auto run_line = [&](int i, int j) {
    int c = line_singularity_count(spec, i, j);
    counts.push_back(Json{{"i", i + 1}, {"j", j + 1}, {"count", c}});
    if (req.params.contains("expect") && c != req.params.at("expect").get<int>()) ok = false;
  };
  if (req.params.value("all", false)) {
    for (int i = 0; i < spec.r(); ++i)
      for (int j = i + 1; j < spec.r(); ++j) run_line(i, j);
  } else {
    run_line(req.params.at("i").get<int>() - 1, req.params.at("j").get<int>() - 1);
  }
  Json d{{"lines", counts}};
  return ok ? pass(d) : fail(d);
}

CheckResult check_plane_singularities(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  LogFoliationSpec spec = s.spec();
  Json counts = Json::array();
  bool ok = true;
  auto run_plane = [&](int j) {
    int c = plane_singularity_count(spec, j);
    counts.push_back(Json{{"j", j + 1}, {"count", c}});
    if (req.params.contains("expect") && c != req.params.at("expect").get<int>()) ok = false;
  };
  if (req.params.value("all", false)) {
    for (int j = 0; j < spec.r(); ++j) run_plane(j);
  } else {
    run_plane(req.params.at("j").get<int>() - 1);
  }
  Json d{{"planes", counts}};
  return ok ? pass(d) : fail(d);
}

CheckResult check_divisor_audit(const Scenario& s, const CheckRequest& req, std::uint64_t seed) {
  AuditOptions opts;
  opts.seed = seed;
  opts.newton_starts = req.params.value("starts", 2000);
  opts.residual_tol = s.tolerances.value("residual", 1e-8);
  opts.dedup_tol = s.tolerances.value("dedup", 1e-6);
  SingularityReport rep = divisor_singularity_audit(s.spec(), opts);
  int psum = 0, lsum = 0;
  for (int c : rep.per_plane) psum += c;
  for (int c : rep.per_line) lsum += c;
  Json points = Json::array();
  for (const auto& pt : rep.off_divisor_points) {
    Json coords = Json::array();
    for (int i = 0; i < pt.size(); ++i) coords.push_back(complex_to_json(pt(i)));
    points.push_back(coords);
  }
  Json d{{"per_plane", rep.per_plane},
         {"per_line", rep.per_line},
         {"triple_points", rep.triple_points},
         {"plane_sum", psum},
         {"line_sum", lsum},
         {"inclusion_exclusion_total", rep.inclusion_exclusion_total},
         {"off_divisor_found", rep.off_divisor_found},
         {"off_divisor_points", points},
         {"starts", opts.newton_starts},
         {"seed", seed}};
  bool ok = true;
  if (req.params.contains("expect_inclusion_exclusion"))
    ok &= rep.inclusion_exclusion_total == req.params.at("expect_inclusion_exclusion").get<int>();
  if (req.params.contains("expect_off_divisor"))
    ok &= rep.off_divisor_found == req.params.at("expect_off_divisor").get<int>();
  return ok ? pass(d) : fail(d);
}

CheckResult check_residue_recovery(const Scenario& s, const CheckRequest& req, std::uint64_t seed) {
  double tol = s.tolerances.value("residue", req.params.value("tol", 1e-8));
  auto rows = recover_residues(s.spec(), seed);
  Json rows_json = Json::array();
  double worst = 0.0, worst32 = 0.0;
  for (const auto& row : rows) {
    worst = std::max(worst, row.error);
    worst32 = std::max(worst32, row.error_n32);
    IndexTuple one_based;
    for (int i : row.index) one_based.push_back(i + 1);
    rows_json.push_back(Json{{"I", one_based},
                             {"exact", format_scalar(row.exact)},
                             {"recovered", complex_to_json(row.recovered)},
                             {"error", row.error},
                             {"error_n32", row.error_n32},
                             {"epsilon", row.epsilon},
                             {"N", row.nodes},
                             {"seed", row.seed}});
  }
  Json d{{"rows", rows_json}, {"worst_error", worst}, {"worst_error_n32", worst32}, {"tol", tol}};
  bool ok = worst < tol;
  if (req.params.contains("expect_decay_ratio")) {
    double ratio = worst32 / std::max(worst, 1e-300);
    d["decay_ratio"] = ratio;
    ok &= ratio >= req.params.at("expect_decay_ratio").get<double>();
  }
  return ok ? pass(d) : fail(d);
}

Eigen::VectorXcd kupka_point_from_params(const Scenario& s, const Json& params) {
  if (params.contains("point")) {
    const Json& pj = params.at("point");
    Eigen::VectorXcd pt(pj.size());
    for (std::size_t i = 0; i < pj.size(); ++i) pt(static_cast<int>(i)) = complex_from_json(pj.at(i));
    return pt;
  }
  const std::string at = params.value("at", "pole_intersection");
  const int nv = s.poles.nvars();
  if (at == "pole_intersection") {
    ExactVector p = linear_system_point(s.poles.polys, nv);
    Eigen::VectorXcd pt(nv);
    for (int i = 0; i < nv; ++i) pt(i) = p(i).approx();
    return pt;
  }
  if (at == "stratum") {
    std::vector<MultiPoly> forms;
    for (int i : params.at("poles").get<std::vector<int>>())
      forms.push_back(s.poles.polys.at(static_cast<std::size_t>(i - 1)));
    ExactMatrix rows = ExactMatrix::Constant(static_cast<int>(forms.size()), nv, GaussianRational(0));
    for (std::size_t row = 0; row < forms.size(); ++row)
      for (const auto& [e, c] : forms[row].terms())
        for (int k = 0; k < nv; ++k)
          if (e[k] == 1) rows(static_cast<int>(row), k) = c;
    auto basis = kernel_basis(rows);
    const Json& comb = params.at("combination");
    if (comb.size() != basis.size())
      throw std::invalid_argument("kupka stratum point: combination length must match kernel dimension");
    Eigen::VectorXcd pt = Eigen::VectorXcd::Zero(nv);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      std::complex<double> c = complex_from_json(comb.at(b));
      for (int i = 0; i < nv; ++i) pt(i) += c * basis[b](i).approx();
    }
    return pt;
  }
  throw std::invalid_argument("kupka_classify: unknown point mode \"" + at + "\"");
}

CheckResult check_kupka_classify(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  LogFoliationSpec spec = s.spec();
  KupkaTolerances tols;
  tols.zero_tol = s.tolerances.value("kupka_zero", 1e-9);
  Eigen::VectorXcd pt = kupka_point_from_params(s, req.params);
  KupkaVerdict v = kupka_classify(spec, pt, tols);
  Json evs = Json::array();
  for (auto ev : v.eigenvalues) evs.push_back(complex_to_json(ev));
  Json d{{"kind", to_string(v.kind)},
         {"omega_mag", v.omega_mag},
         {"domega_mag", v.domega_mag},
         {"eigenvalues", evs}};
  bool ok = true;
  if (req.params.contains("expect_kind")) ok &= to_string(v.kind) == req.params.at("expect_kind").get<std::string>();
  if (req.params.contains("eq26_tau")) {
    std::vector<Rational> tau;
    for (const auto& t : req.params.at("eq26_tau")) tau.push_back(parse_rational(t.get<std::string>()));
    std::vector<GaussianRational> exact = kupka_eigenvalue_system(s.poles.degrees, s.n, tau);
    std::vector<std::complex<double>> num = v.eigenvalues, ex;
    for (const auto& x : exact) ex.push_back(x.approx());
    auto by_mag = [](std::complex<double> a, std::complex<double> b) { return std::abs(a) > std::abs(b); };
    std::sort(num.begin(), num.end(), by_mag);
    std::sort(ex.begin(), ex.end(), by_mag);
    double worst = 0.0;
    if (num.size() != ex.size() || ex.empty() || std::abs(ex[0]) == 0.0) {
      ok = false;
    } else {
      std::complex<double> scale = num[0] / ex[0];
      for (std::size_t i = 0; i < ex.size(); ++i)
        worst = std::max(worst, std::abs(num[i] - scale * ex[i]) / std::abs(scale));
      d["eq26_match_error"] = worst;
      ok &= worst < 1e-6;
    }
  }
  return ok ? pass(d) : fail(d);
}

CheckResult check_eigenvalue_system(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  std::vector<int> degrees = req.params.contains("degrees")
                                 ? req.params.at("degrees").get<std::vector<int>>()
                                 : s.poles.degrees;
  int n = req.params.value("n", s.n);
  std::vector<Rational> tau;
  for (const auto& t : req.params.at("tau")) tau.push_back(parse_rational(t.get<std::string>()));
  auto x = kupka_eigenvalue_system(degrees, n, tau);
  Json sol = Json::array();
  for (const auto& v : x) sol.push_back(format_scalar(v));
  Json d{{"solution", sol}};
  bool ok = true;
  if (req.params.contains("expect")) {
    std::vector<GaussianRational> expect;
    for (const auto& e : req.params.at("expect")) expect.push_back(parse_scalar(e.get<std::string>()));
    // Compare up to scale: normalize both on the first nonzero entry.
    GaussianRational sx(0), se(0);
    for (const auto& v : x)
      if (!v.is_zero()) {
        sx = v;
        break;
      }
    for (const auto& v : expect)
      if (!v.is_zero()) {
        se = v;
        break;
      }
    ok &= x.size() == expect.size() && !sx.is_zero() && !se.is_zero();
    if (ok)
      for (std::size_t i = 0; i < x.size(); ++i) ok &= x[i] / sx == expect[i] / se;
  }
  return ok ? pass(d) : fail(d);
}

CheckResult check_perturbation_family(const Scenario& s, const CheckRequest& req, std::uint64_t) {
  std::vector<int> degrees = req.params.contains("degrees")
                                 ? req.params.at("degrees").get<std::vector<int>>()
                                 : s.poles.degrees;
  int n = req.params.value("n", s.n);
  std::vector<std::vector<Rational>> tau;
  for (const auto& row : req.params.at("tau_table")) {
    std::vector<Rational> trow;
    for (const auto& t : row) trow.push_back(parse_rational(t.get<std::string>()));
    tau.push_back(std::move(trow));
  }
  std::vector<Covector> family = perturbation_family(degrees, n, tau);
  bool radial_ok = true;
  for (const auto& theta : family)
    radial_ok &= radial_contraction(ResidueTensor::from_covector(theta), degrees).is_zero();
  ResidueTensor wedge = wedge_covectors(family);
  bool dec = !wedge.is_zero() && is_decomposable(wedge);
  bool matches_tensor = wedge == s.tensor;
  Json d{{"covectors", family.size()},
         {"radial_annihilated", radial_ok},
         {"wedge_decomposable", dec},
         {"wedge_equals_scenario_tensor", matches_tensor}};
  bool ok = radial_ok && dec;
  if (req.params.value("expect_match", false)) ok &= matches_tensor;
  return ok ? pass(d) : fail(d);
}

CheckResult check_poincare(const Scenario&, const CheckRequest& req, std::uint64_t) {
  std::vector<std::complex<double>> values;
  for (const auto& v : req.params.at("values")) {
    if (v.is_string())
      values.push_back(parse_scalar(v.get<std::string>()).approx());
    else
      values.push_back(complex_from_json(v));
  }
  PoincareVerdict v = poincare_domain_check(values);
  Json d{{"in_domain", v.in_domain}, {"witness", complex_to_json(v.witness)}};
  if (req.params.contains("expect")) return v.in_domain == req.params.at("expect").get<bool>() ? pass(d) : fail(d);
  return v.in_domain ? pass(d) : fail(d);
}

CheckResult check_nonresonance(const Scenario&, const CheckRequest& req, std::uint64_t) {
  std::vector<GaussianRational> rho;
  for (const auto& v : req.params.at("values")) rho.push_back(parse_scalar(v.get<std::string>()));
  NonresonanceVerdict v = nonresonance_check(rho);
  Json d{{"nonresonant", v.nonresonant}};
  if (v.violation) {
    d["violation"] = Json{{"target", v.violation->target + 1}, {"coefficients", v.violation->coeffs}};
  }
  if (req.params.contains("expect")) return v.nonresonant == req.params.at("expect").get<bool>() ? pass(d) : fail(d);
  return v.nonresonant ? pass(d) : fail(d);
}

CheckResult check_identity_suite(const Scenario& s, const CheckRequest& req, std::uint64_t seed) {
  LogFoliationSpec spec = s.spec();
  const int nv = spec.poles.nvars();
  const int trials = req.params.value("trials", 5);
  Rng rng(seed);
  PolyForm w = expand(spec);
  MultiPoly big_f = spec.poles.product();

  bool dd_zero = exterior_derivative(exterior_derivative(w)).is_zero();

  bool leibniz = true;
  for (int t = 0; t < trials; ++t) {
    int p = rng.int_in(0, std::max(0, nv - 2));
    PolyForm a = random_form(rng, nv, p, 1);
    PolyForm b = random_form(rng, nv, rng.int_in(0, 1), 1);
    PolyForm rhs = wedge(exterior_derivative(a), b);
    PolyForm tail = wedge(a, exterior_derivative(b));
    if (p % 2 != 0) tail = -tail;
    rhs += tail;
    leibniz &= exterior_derivative(wedge(a, b)) == rhs;
  }

  bool phi_hom = true;
  for (int t = 0; t < trials; ++t) {
    int p = rng.int_in(1, 2);
    int q = rng.int_in(1, 2);
    if (p + q > spec.r() || p + q > nv) continue;
    ResidueTensor a = random_tensor(rng, spec.r(), p);
    ResidueTensor b = random_tensor(rng, spec.r(), q);
    LogFoliationSpec sa(spec.poles, a), sb(spec.poles, b), sab(spec.poles, tensor_wedge(a, b));
    phi_hom &= big_f * expand(sab) == wedge(expand(sa), expand(sb));
  }

  bool euler = true;
  PolyVectorField r_field = radial_field(nv);
  for (std::size_t j = 0; j < spec.poles.polys.size(); ++j) {
    const MultiPoly& f = spec.poles.polys[j];
    PolyForm df = exterior_derivative(PolyForm::from_poly(f));
    euler &= contract(df, r_field) == PolyForm::from_poly(GaussianRational(spec.poles.degrees[j]) * f);
  }

  bool radial_compat = true;
  if (spec.p() >= 1) {
    LogFoliationSpec contracted(spec.poles, radial_contraction(spec.tensor, spec.poles.degrees));
    radial_compat = contract(w, r_field) == expand(contracted);
  }

  bool closed = is_closed_log(spec);

  Json d{{"dd_zero", dd_zero},       {"leibniz", leibniz}, {"phi_homomorphism", phi_hom},
         {"euler", euler},           {"radial_compatibility", radial_compat},
         {"closed_log", closed},     {"trials", trials}};
  bool ok = dd_zero && leibniz && phi_hom && euler && radial_compat && closed;
  return ok ? pass(d) : fail(d);
}

}  // namespace

const std::map<std::string, CheckFn>& check_registry() {
  static const std::map<std::string, CheckFn> registry = {
      {"validate", check_validate},
      {"is_logarithmic", check_is_logarithmic},
      {"is_closed_log", check_is_closed_log},
      {"invariant_pole_components", check_invariant_poles},
      {"foliation_degree", check_foliation_degree},
      {"degree_by_restriction", check_degree_by_restriction},
      {"integrability_p2", check_integrability_p2},
      {"first_integral", check_first_integral},
      {"is_decomposable", check_is_decomposable},
      {"plucker_defects", check_plucker_defects},
      {"decompose", check_decompose},
      {"decompose_corank2", check_decompose_corank2},
      {"radial_kernel", check_radial_kernel},
      {"expand_degree", check_expand_degree},
      {"line_singularities", check_line_singularities},
      {"plane_singularities", check_plane_singularities},
      {"divisor_singularity_audit", check_divisor_audit},
      {"residue_recovery", check_residue_recovery},
      {"kupka_classify", check_kupka_classify},
      {"kupka_eigenvalue_system", check_eigenvalue_system},
      {"perturbation_family", check_perturbation_family},
      {"poincare_domain", check_poincare},
      {"nonresonance", check_nonresonance},
      {"identity_suite", check_identity_suite},
  };
  return registry;
}

Json run_scenario(const Scenario& s) {
  struct Slot {
    std::string name;
    Json params;
    CheckResult result;
    double duration_ms = 0.0;
  };
  std::vector<Slot> slots(s.checks.size());

  parallel_for(s.checks.size(), [&](std::size_t k) {
    const CheckRequest& req = s.checks[k];
    Slot& slot = slots[k];
    slot.name = req.name;
    slot.params = req.params;
    auto t0 = std::chrono::steady_clock::now();
    try {
      slot.result = check_registry().at(req.name)(s, req, derive_seed(s.seed, k));
    } catch (const std::exception& e) {
      slot.result = CheckResult{"error", Json{{"message", e.what()}}};
    }
    auto t1 = std::chrono::steady_clock::now();
    slot.duration_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  });

  std::vector<std::size_t> order(slots.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return slots[a].name < slots[b].name; });

  Json checks = Json::array();
  int npass = 0, nfail = 0, nerror = 0;
  for (std::size_t i : order) {
    const Slot& slot = slots[i];
    if (slot.result.status == "pass")
      ++npass;
    else if (slot.result.status == "fail")
      ++nfail;
    else
      ++nerror;
    Json entry{{"name", slot.name}};
    if (!slot.params.empty()) entry["params"] = slot.params;
    entry["status"] = slot.result.status;
    if (!slot.result.details.empty()) entry["details"] = slot.result.details;
    entry["duration_ms"] = slot.duration_ms;
    checks.push_back(std::move(entry));
  }

  Json report{{"schema", "logfol-report/1"}};
  if (!s.name.empty()) report["scenario"] = s.name;
  report["seed"] = s.seed;
  report["checks"] = checks;
  report["summary"] =
      Json{{"pass", npass}, {"fail", nfail}, {"error", nerror}, {"total", npass + nfail + nerror}};
  return report;
}

// ---------------------------------------------------------------------------
// Built-in examples

namespace {

Scenario scenario_from_spec(const LogFoliationSpec& spec, std::string name, std::uint64_t seed) {
  Scenario s;
  s.name = std::move(name);
  s.n = spec.n();
  s.seed = seed;
  s.poles = spec.poles;
  s.tensor = spec.tensor;
  return s;
}

}  // namespace

std::vector<std::string> builtin_example_names() {
  return {"p3-planes", "rational-fibration", "perturbation-family"};
}

Scenario builtin_example(const std::string& name) {
  if (name == "p3-planes") {
    Scenario s = scenario_from_spec(p3_planes_spec(1), "p3-planes", 1);
    s.checks = {
        {"validate", Json::object()},
        {"expand_degree", Json::object()},
        {"is_logarithmic", Json::object()},
        {"is_closed_log", Json::object()},
        {"invariant_pole_components", Json::object()},
        {"foliation_degree", Json{{"expect", 3}}},
        {"degree_by_restriction", Json::object()},
        {"radial_kernel", Json{{"expect_dim", 10}}},
        {"integrability_p2", Json{{"expect_plucker", false}, {"expect_wedge_zero", true}}},
        {"is_decomposable", Json{{"expect", false}}},
        {"plucker_defects", Json{{"expect_empty", false}}},
        {"line_singularities", Json{{"all", true}, {"expect", 4}}},
        {"plane_singularities", Json{{"all", true}, {"expect", 13}}},
        {"divisor_singularity_audit",
         Json{{"starts", 4000}, {"expect_inclusion_exclusion", 38}, {"expect_off_divisor", 2}}},
        {"residue_recovery", Json{{"tol", 1e-8}}},
        {"identity_suite", Json{{"trials", 5}}},
    };
    return s;
  }
  if (name == "rational-fibration") {
    Scenario s = scenario_from_spec(rational_fibration_spec(3), "rational-fibration", 3);
    s.checks = {
        {"validate", Json::object()},
        {"expand_degree", Json::object()},
        {"is_logarithmic", Json::object()},
        {"is_closed_log", Json::object()},
        {"invariant_pole_components", Json::object()},
        {"foliation_degree", Json{{"expect", 3}}},
        {"degree_by_restriction", Json::object()},
        {"radial_kernel", Json{{"expect_dim", 1}}},
        {"first_integral", Json{{"expect_k", Json::array({6, 3, 2})}}},
        {"identity_suite", Json{{"trials", 5}}},
    };
    return s;
  }
  if (name == "perturbation-family") {
    std::vector<std::vector<Rational>> tau = {{Rational(1, 8)}, {Rational(1, 16)}};
    Scenario s = scenario_from_spec(perturbation_spec(4, tau, 21), "perturbation-family", 21);
    Json tau_table = Json::array({Json::array({"1/8"}), Json::array({"1/16"})});
    s.checks = {
        {"validate", Json::object()},
        {"expand_degree", Json::object()},
        {"is_logarithmic", Json::object()},
        {"is_closed_log", Json::object()},
        {"invariant_pole_components", Json::object()},
        {"foliation_degree", Json::object()},
        {"degree_by_restriction", Json::object()},
        {"is_decomposable", Json{{"expect", true}}},
        {"plucker_defects", Json{{"expect_empty", true}}},
        {"decompose", Json::object()},
        {"decompose_corank2", Json::object()},
        {"perturbation_family", Json{{"tau_table", tau_table}, {"expect_match", true}}},
        {"kupka_eigenvalue_system",
         Json{{"tau", Json::array({"0/1", "0/1"})},
              {"expect", Json::array({"1/1", "1/1", "1/1", "-3/1"})}}},
        {"kupka_eigenvalue_system", Json{{"tau", Json::array({"1/8", "1/16"})}}},
        {"kupka_classify",
         Json{{"at", "pole_intersection"},
              {"expect_kind", "ndgK"},
              {"eq26_tau", Json::array({"1/8", "1/16"})}}},
        {"kupka_classify",
         Json{{"at", "stratum"},
              {"poles", Json::array({1, 2, 3})},
              {"combination", Json::array({Json::array({1.0, 0.0}), Json::array({2.0, 0.0})})},
              {"expect_kind", "kupka"}}},
        {"poincare_domain", Json{{"values", Json::array({"1/1", "2/1", "3/1"})}, {"expect", true}}},
        {"poincare_domain",
         Json{{"values", Json::array({"1/1", "-1/1"})}, {"expect", false}}},
        {"nonresonance", Json{{"values", Json::array({"2/1", "3/1"})}, {"expect", true}}},
        {"nonresonance", Json{{"values", Json::array({"1/1", "2/1"})}, {"expect", false}}},
        {"identity_suite", Json{{"trials", 5}}},
    };
    return s;
  }
  throw std::invalid_argument("unknown builtin example \"" + name + "\" (known: p3-planes, rational-fibration, perturbation-family)");
}

}  // namespace logfol
