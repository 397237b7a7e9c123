#include "logfol/foliation.hpp"

#include "logfol/parallel.hpp"
#include "logfol/prng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace logfol {

namespace {

constexpr double kPi = std::numbers::pi;

bool divides_all_coefficients(const MultiPoly& f, const PolyForm& w) {
  for (const auto& [idx, c] : w.coefficients())
    if (!divides(f, c)) return false;
  return true;
}

}  // namespace

bool is_logarithmic(const PolyForm& w, const PoleSystem& poles) {
  for (const auto& f : poles.polys) {
    PolyForm df = exterior_derivative(PolyForm::from_poly(f));
    if (!divides_all_coefficients(f, wedge(df, w))) return false;
  }
  return true;
}

bool is_closed_log(const LogFoliationSpec& spec) {
  PolyForm w = expand(spec);
  MultiPoly big_f = spec.poles.product();
  PolyForm lhs = big_f * exterior_derivative(w);
  PolyForm rhs = wedge(exterior_derivative(PolyForm::from_poly(big_f)), w);
  return lhs == rhs;
}

int foliation_degree(const LogFoliationSpec& spec) {
  int d = -spec.p() - 1;
  for (int dj : spec.poles.degrees) d += dj;
  if (d < 0) throw std::invalid_argument("foliation_degree: negative degree");
  return d;
}

int degree_by_restriction(const LogFoliationSpec& spec, std::uint64_t seed) {
  if (spec.p() > spec.n() - 1)
    throw std::invalid_argument("degree_by_restriction: requires p <= n - 1");
  const int nv = spec.poles.nvars();
  const int m = spec.p() + 1;
  PolyForm w = expand(spec);

  for (int attempt = 0; attempt < 5; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    ExactMatrix plane(nv, m);
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < m; ++j) plane(i, j) = GaussianRational(rng.int_in(-9, 9));
    if (rank(plane) != m) continue;

    PolyForm pulled = pullback_linear(w, plane);
    if (pulled.is_zero()) continue;

    // pulled = i_R(G vol): the coefficient on the tuple omitting k equals
    // (-1)^k s_k G; recover G from each index and check consistency.
    MultiPoly g(m);
    bool ok = true;
    bool have = false;
    for (int k = 0; k < m && ok; ++k) {
      IndexTuple omit_k;
      for (int i = 0; i < m; ++i)
        if (i != k) omit_k.push_back(i);
      const MultiPoly* bk = pulled.coefficient(omit_k);
      if (!bk) {
        ok = false;  // nonzero G forces every s_k G coefficient nonzero
        break;
      }
      MultiPoly shifted(m);
      for (const auto& [e, c] : bk->terms()) {
        if (e[k] == 0) {
          ok = false;
          break;
        }
        ExpVec d = e;
        --d[k];
        shifted.add_term(d, c);
      }
      if (!ok) break;
      if (k % 2 != 0) shifted = -shifted;
      if (!have) {
        g = std::move(shifted);
        have = true;
      } else if (!(g == shifted)) {
        throw std::logic_error("degree_by_restriction: inconsistent recovery across indices");
      }
    }
    if (!ok || !have) continue;
    auto deg = g.homogeneous_degree();
    if (!deg) throw std::logic_error("degree_by_restriction: recovered polynomial not homogeneous");
    return *deg;
  }
  throw std::runtime_error("degree_by_restriction: degenerate restriction after 5 retries (non-generic spec)");
}

IntegrabilityVerdict integrability_p2(const LogFoliationSpec& spec) {
  if (spec.p() != 2) throw std::invalid_argument("integrability_p2: requires p = 2");
  IntegrabilityVerdict v;
  v.tensor_plucker = plucker_defects(spec.tensor).empty();
  PolyForm w = expand(spec);
  v.symbolic_wedge_zero = wedge(w, w).is_zero();
  return v;
}

FirstIntegral first_integral(const LogFoliationSpec& spec) {
  if (spec.r() != spec.p() + 1)
    throw std::invalid_argument("first_integral: requires r = p + 1");
  if (!spec.is_projective())
    throw std::invalid_argument("first_integral: tensor not in the radial kernel");

  const auto& d = spec.poles.degrees;
  long big_l = 1;
  for (int dj : d) big_l = std::lcm(big_l, static_cast<long>(dj));
  std::vector<long> k;
  k.reserve(d.size());
  for (int dj : d) k.push_back(big_l / dj);
  long g = 0;
  for (long kj : k) g = std::gcd(g, kj);
  for (long& kj : k) kj /= g;

  PolyForm w = expand(spec);
  const MultiPoly& f1 = spec.poles.polys[0];
  PolyForm df1 = exterior_derivative(PolyForm::from_poly(f1));
  for (int j = 1; j < spec.r(); ++j) {
    const MultiPoly& fj = spec.poles.polys[static_cast<std::size_t>(j)];
    PolyForm dfj = exterior_derivative(PolyForm::from_poly(fj));
    PolyForm exact_1form = GaussianRational(d[0]) * (f1 * dfj) - GaussianRational(d[static_cast<std::size_t>(j)]) * (fj * df1);
    if (!wedge(exact_1form, w).is_zero())
      throw std::logic_error("first_integral: wedge-vanishing verification failed");
  }

  FirstIntegral out;
  for (std::size_t j = 0; j < spec.poles.polys.size(); ++j)
    out.components.emplace_back(spec.poles.polys[j], static_cast<int>(k[j]));
  return out;
}

std::vector<bool> invariant_pole_components(const LogFoliationSpec& spec) {
  PolyForm w = expand(spec);
  std::vector<bool> out;
  out.reserve(spec.poles.polys.size());
  for (const auto& f : spec.poles.polys) {
    PolyForm df = exterior_derivative(PolyForm::from_poly(f));
    out.push_back(divides_all_coefficients(f, wedge(df, w)));
  }
  return out;
}

ExactVector linear_system_point(const std::vector<MultiPoly>& linear_forms, int nvars) {
  ExactMatrix m = ExactMatrix::Constant(static_cast<int>(linear_forms.size()), nvars, GaussianRational(0));
  for (std::size_t row = 0; row < linear_forms.size(); ++row) {
    for (const auto& [e, c] : linear_forms[row].terms()) {
      if (total_degree(e) != 1) throw std::invalid_argument("linear_system_point: form is not linear");
      for (int i = 0; i < nvars; ++i)
        if (e[i] == 1) m(static_cast<int>(row), i) = c;
    }
  }
  auto basis = kernel_basis(m);
  if (basis.size() != 1) throw std::invalid_argument("linear_system_point: kernel dimension is not 1");
  return basis.front();
}

namespace {

void require_linear_example_class(const LogFoliationSpec& spec) {
  if (spec.n() != 3) throw std::invalid_argument("singularity counting: requires n = 3");
  for (int d : spec.poles.degrees)
    if (d != 1) throw std::invalid_argument("singularity counting: requires linear poles");
}

/// Common zeros (with multiplicity) of a family of polynomials on the
/// projective line {s u + t v}, via the t-chart plus the order at s = 0 in
/// the opposite chart. Throws when every polynomial vanishes identically.
int common_zeros_on_line(const std::vector<const MultiPoly*>& cs, const ExactVector& u,
                         const ExactVector& v) {
  UniPoly g1, g2;
  bool all_zero = true;
  for (const MultiPoly* c : cs) {
    UniPoly p1 = c->restrict_line(u, v);
    UniPoly p2 = c->restrict_line(v, u);
    if (!p1.is_zero()) {
      all_zero = false;
      g1 = g1.is_zero() ? p1 : uni_gcd(g1, p1);
    }
    if (!p2.is_zero()) {
      all_zero = false;
      g2 = g2.is_zero() ? p2 : uni_gcd(g2, p2);
    }
  }
  if (all_zero) throw std::runtime_error("line in singular set");
  int count = g1.is_zero() ? 0 : g1.degree();
  if (!g2.is_zero()) count += g2.order_at_zero();
  return count;
}

}  // namespace

int line_singularity_count(const LogFoliationSpec& spec, int i, int j) {
  require_linear_example_class(spec);
  if (i == j) throw std::invalid_argument("line_singularity_count: need two distinct poles");
  PolyForm w = expand(spec);

  ExactMatrix m = ExactMatrix::Constant(2, spec.poles.nvars(), GaussianRational(0));
  const MultiPoly* pair[2] = {&spec.poles.polys[static_cast<std::size_t>(i)],
                              &spec.poles.polys[static_cast<std::size_t>(j)]};
  for (int row = 0; row < 2; ++row)
    for (const auto& [e, c] : pair[row]->terms())
      for (int k = 0; k < spec.poles.nvars(); ++k)
        if (e[k] == 1) m(row, k) = c;
  auto basis = kernel_basis(m);
  if (basis.size() != 2) throw std::invalid_argument("line_singularity_count: dependent linear forms");

  std::vector<const MultiPoly*> cs;
  for (const auto& [idx, c] : w.coefficients()) cs.push_back(&c);
  return common_zeros_on_line(cs, basis[0], basis[1]);
}

int plane_singularity_count(const LogFoliationSpec& spec, int j) {
  require_linear_example_class(spec);
  const int nv = spec.poles.nvars();

  // Plane coordinates: columns of the kernel of l_j.
  ExactMatrix lj = ExactMatrix::Constant(1, nv, GaussianRational(0));
  for (const auto& [e, c] : spec.poles.polys[static_cast<std::size_t>(j)].terms())
    for (int k = 0; k < nv; ++k)
      if (e[k] == 1) lj(0, k) = c;
  auto basis = kernel_basis(lj);
  if (basis.size() != 3) throw std::invalid_argument("plane_singularity_count: degenerate plane");
  ExactMatrix embed(nv, 3);
  for (int col = 0; col < 3; ++col)
    for (int row = 0; row < nv; ++row) embed(row, col) = basis[static_cast<std::size_t>(col)](row);

  // Restricted foliation on the plane: residue of the tensor on slot j,
  // remaining poles restricted.
  std::vector<MultiPoly> restricted;
  for (int b = 0; b < spec.r(); ++b) {
    if (b == j) continue;
    MultiPoly fb = spec.poles.polys[static_cast<std::size_t>(b)].substitute_linear(embed);
    if (fb.is_zero()) throw std::runtime_error("plane_singularity_count: pole degenerates on the plane (reseed)");
    restricted.push_back(std::move(fb));
  }
  LogFoliationSpec plane_spec(make_pole_system(2, std::move(restricted)), drop_pole(spec.tensor, j));
  PolyForm wj = expand(plane_spec);

  std::vector<const MultiPoly*> coeffs(3, nullptr);
  for (const auto& [idx, c] : wj.coefficients()) coeffs[static_cast<std::size_t>(idx[0])] = &c;
  int nonzero = 0;
  for (const MultiPoly* c : coeffs)
    if (c) ++nonzero;
  if (nonzero < 3)
    throw std::runtime_error("plane_singularity_count: vanishing restricted coefficient (non-generic; reseed)");

  // Affine chart s_0 = 1, eliminate s_2 by resultants against the first
  // coefficient, then count the gcd's roots.
  std::vector<MultiPoly> chart;
  chart.reserve(3);
  for (const MultiPoly* c : coeffs) chart.push_back(c->dehomogenize(0).drop_var(0));

  auto as_unipoly_in_x = [](const MultiPoly& f) {
    std::vector<MultiPoly> by_x = coefficients_in_var(f, 0);
    std::vector<GaussianRational> cs;
    cs.reserve(by_x.size());
    for (const auto& c : by_x) {
      if (!c.is_constant()) throw std::logic_error("plane_singularity_count: residual variable after elimination");
      cs.push_back(c.constant_value());
    }
    return UniPoly(std::move(cs));
  };

  MultiPoly r01 = sylvester_resultant(coefficients_in_var(chart[0], 1), coefficients_in_var(chart[1], 1));
  MultiPoly r02 = sylvester_resultant(coefficients_in_var(chart[0], 1), coefficients_in_var(chart[2], 1));
  if (r01.is_zero() || r02.is_zero())
    throw std::runtime_error("plane_singularity_count: identically vanishing resultant (non-generic; reseed)");
  UniPoly g = uni_gcd(as_unipoly_in_x(r01), as_unipoly_in_x(r02));
  int count = g.degree();

  // Points on the chart's line at infinity (s_0 = 0).
  ExactVector u = ExactVector::Constant(3, GaussianRational(0));
  ExactVector v = ExactVector::Constant(3, GaussianRational(0));
  u(1) = GaussianRational(1);
  v(2) = GaussianRational(1);
  std::vector<const MultiPoly*> cs{coeffs[0], coeffs[1], coeffs[2]};
  count += common_zeros_on_line(cs, u, v);
  return count;
}

namespace {

Eigen::VectorXcd chart_normalize(Eigen::VectorXcd z) {
  int best = 0;
  double mag = 0.0;
  for (int i = 0; i < z.size(); ++i)
    if (std::abs(z(i)) > mag) {
      mag = std::abs(z(i));
      best = i;
    }
  return z / z(best);
}

double projective_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  double na = a.norm(), nb = b.norm();
  std::complex<double> inner = (a.conjugate().transpose() * b)(0);
  double cos2 = std::norm(inner) / (na * na * nb * nb);
  return std::sqrt(std::max(0.0, 1.0 - cos2));
}

std::vector<IndexTuple> three_subsets_of_six() {
  std::vector<IndexTuple> out;
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b)
      for (int c = b + 1; c < 6; ++c) out.push_back({a, b, c});
  return out;
}

}  // namespace

SingularityReport divisor_singularity_audit(const LogFoliationSpec& spec, const AuditOptions& opts) {
  require_linear_example_class(spec);
  if (spec.r() != 6 || spec.p() != 2)
    throw std::invalid_argument("divisor_singularity_audit: requires the six-plane p = 2 class");

  SingularityReport report;
  for (int j = 0; j < 6; ++j) report.per_plane.push_back(plane_singularity_count(spec, j));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) report.per_line.push_back(line_singularity_count(spec, i, j));

  PolyForm w = expand(spec);
  for (const IndexTuple& t : three_subsets_of_six()) {
    ExactVector point = linear_system_point(
        {spec.poles.polys[static_cast<std::size_t>(t[0])], spec.poles.polys[static_cast<std::size_t>(t[1])],
         spec.poles.polys[static_cast<std::size_t>(t[2])]},
        spec.poles.nvars());
    for (const auto& [idx, c] : w.coefficients())
      if (!c.eval_exact(point).is_zero())
        throw std::runtime_error("divisor_singularity_audit: triple point is not singular (non-generic data)");
    ++report.triple_points;
  }

  int plane_sum = 0, line_sum = 0;
  for (int c : report.per_plane) plane_sum += c;
  for (int c : report.per_line) line_sum += c;
  report.inclusion_exclusion_total = plane_sum - line_sum + report.triple_points;

  // Seeded multi-start Newton search for singular points off the divisor.
  const int nv = spec.poles.nvars();
  std::vector<CompiledPoly> eqs;          // six coefficient polynomials, unit-scaled
  std::vector<std::vector<CompiledPoly>> jac;  // per equation, per variable
  for (const auto& [idx, c] : w.coefficients()) {
    double scale = 0.0;
    for (const auto& [e, v] : c.terms()) scale = std::max(scale, std::abs(v.approx()));
    CompiledPoly cp = compile(c);
    for (auto& [cc, e] : cp.terms) cc /= scale;
    eqs.push_back(std::move(cp));
    std::vector<CompiledPoly> row;
    for (int var = 0; var < nv; ++var) {
      CompiledPoly dp = compile(c.derivative(var));
      for (auto& [cc, e] : dp.terms) cc /= scale;
      row.push_back(std::move(dp));
    }
    jac.push_back(std::move(row));
  }
  std::vector<CompiledPoly> pole_polys;
  for (const auto& f : spec.poles.polys) {
    double scale = 0.0;
    for (const auto& [e, v] : f.terms()) scale = std::max(scale, std::abs(v.approx()));
    CompiledPoly cp = compile(f);
    for (auto& [cc, e] : cp.terms) cc /= scale;
    pole_polys.push_back(std::move(cp));
  }

  std::vector<IndexTuple> subsystems = three_subsets_of_six();
  const std::size_t starts = static_cast<std::size_t>(opts.newton_starts);
  std::vector<std::optional<Eigen::VectorXcd>> found(starts);

  parallel_for(starts, [&](std::size_t k) {
    Rng rng(derive_seed(opts.seed, k));
    const int chart = static_cast<int>(k % static_cast<std::size_t>(nv));
    const IndexTuple& sub = subsystems[(k / static_cast<std::size_t>(nv)) % subsystems.size()];

    std::vector<std::complex<double>> z(static_cast<std::size_t>(nv));
    z[static_cast<std::size_t>(chart)] = 1.0;
    std::vector<int> free_vars;
    for (int i = 0; i < nv; ++i)
      if (i != chart) free_vars.push_back(i);
    for (int i : free_vars) z[static_cast<std::size_t>(i)] = 2.0 * rng.complex_in_box();

    Eigen::Vector3cd f;
    Eigen::Matrix3cd jm;
    bool converged = false;
    for (int iter = 0; iter < 60; ++iter) {
      for (int row = 0; row < 3; ++row)
        f(row) = eqs[static_cast<std::size_t>(sub[static_cast<std::size_t>(row)])].eval(z);
      if (f.norm() < 1e-13) {
        converged = true;
        break;
      }
      for (int row = 0; row < 3; ++row)
        for (int col = 0; col < 3; ++col)
          jm(row, col) = jac[static_cast<std::size_t>(sub[static_cast<std::size_t>(row)])]
                            [static_cast<std::size_t>(free_vars[static_cast<std::size_t>(col)])].eval(z);
      Eigen::Vector3cd step = jm.partialPivLu().solve(f);
      if (!step.allFinite()) break;
      for (int col = 0; col < 3; ++col) z[static_cast<std::size_t>(free_vars[static_cast<std::size_t>(col)])] -= step(col);
      double zmax = 0.0;
      for (const auto& c : z) zmax = std::max(zmax, std::abs(c));
      if (zmax > 1e8) break;
    }
    if (!converged) return;

    Eigen::VectorXcd zv(nv);
    for (int i = 0; i < nv; ++i) zv(i) = z[static_cast<std::size_t>(i)];
    zv = chart_normalize(zv);
    std::vector<std::complex<double>> zn(zv.data(), zv.data() + zv.size());
    for (const auto& eq : eqs)
      if (std::abs(eq.eval(zn)) > opts.residual_tol) return;  // not a common zero of all six
    for (const auto& f_pole : pole_polys)
      if (std::abs(f_pole.eval(zn)) < opts.off_divisor_tol) return;  // lies on the divisor
    found[k] = zv;
  });

  // Deterministic merge: sort candidates, then greedy projective dedup.
  std::vector<Eigen::VectorXcd> candidates;
  for (const auto& c : found)
    if (c) candidates.push_back(*c);
  std::sort(candidates.begin(), candidates.end(), [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
      if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
    }
    return false;
  });
  for (const auto& c : candidates) {
    bool duplicate = false;
    for (const auto& kept : report.off_divisor_points)
      if (projective_distance(c, kept) < opts.dedup_tol) {
        duplicate = true;
        break;
      }
    if (!duplicate) report.off_divisor_points.push_back(c);
  }
  report.off_divisor_found = static_cast<int>(report.off_divisor_points.size());
  return report;
}

std::string to_string(KupkaKind k) {
  switch (k) {
    case KupkaKind::regular: return "regular";
    case KupkaKind::kupka: return "kupka";
    case KupkaKind::gK: return "gK";
    case KupkaKind::ndgK: return "ndgK";
    case KupkaKind::degenerate: return "degenerate";
  }
  return "?";
}

KupkaVerdict kupka_classify(const LogFoliationSpec& spec, const Eigen::VectorXcd& point,
                            const KupkaTolerances& tols) {
  if (point.size() != spec.poles.nvars())
    throw std::invalid_argument("kupka_classify: point dimension mismatch");
  PolyForm w = expand(spec);

  int chart = 0;
  double mag = 0.0;
  for (int i = 0; i < point.size(); ++i)
    if (std::abs(point(i)) > mag) {
      mag = std::abs(point(i));
      chart = i;
    }
  if (mag == 0.0) throw std::invalid_argument("kupka_classify: zero point");
  Eigen::VectorXcd z = point / point(chart);

  KupkaVerdict verdict;
  verdict.omega_mag = evaluate(w, z).max_abs();
  verdict.domega_mag = evaluate(exterior_derivative(w), z).max_abs();

  if (verdict.omega_mag > tols.zero_tol) {
    verdict.kind = KupkaKind::regular;
    return verdict;
  }
  if (verdict.domega_mag > tols.zero_tol) {
    verdict.kind = KupkaKind::kupka;
    return verdict;
  }

  if (spec.p() != spec.n() - 2)
    throw std::invalid_argument("kupka_classify: gK analysis needs a two-dimensional foliation (p = n - 2)");

  const int n = spec.n();
  PolyVectorField x_field = rotational(affine_chart(w, chart));
  std::vector<CompiledPoly> comps;
  comps.reserve(static_cast<std::size_t>(n));
  for (const auto& c : x_field.components) comps.push_back(compile(c));

  std::vector<std::complex<double>> base;
  base.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < point.size(); ++i)
    if (i != chart) base.push_back(z(i));

  Eigen::MatrixXcd jacobian(n, n);
  const double h = tols.fd_step;
  for (int col = 0; col < n; ++col) {
    std::vector<std::complex<double>> plus = base, minus = base;
    plus[static_cast<std::size_t>(col)] += h;
    minus[static_cast<std::size_t>(col)] -= h;
    for (int row = 0; row < n; ++row)
      jacobian(row, col) =
          (comps[static_cast<std::size_t>(row)].eval(plus) - comps[static_cast<std::size_t>(row)].eval(minus)) /
          (2.0 * h);
  }

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(jacobian, false);
  for (int i = 0; i < n; ++i) verdict.eigenvalues.push_back(solver.eigenvalues()(i));
  std::sort(verdict.eigenvalues.begin(), verdict.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });

  bool all_nonzero = true, any_nonzero = false;
  for (const auto& ev : verdict.eigenvalues) {
    if (std::abs(ev) > tols.zero_tol)
      any_nonzero = true;
    else
      all_nonzero = false;
  }
  verdict.kind = all_nonzero ? KupkaKind::ndgK : (any_nonzero ? KupkaKind::gK : KupkaKind::degenerate);
  return verdict;
}

std::vector<Covector> base_family_covectors(const std::vector<int>& degrees) {
  const int r = static_cast<int>(degrees.size());
  if (r < 2) throw std::invalid_argument("base_family_covectors: need at least two poles");
  std::vector<Covector> out;
  for (int j = 1; j < r; ++j) {
    Covector theta;
    theta.coords.assign(static_cast<std::size_t>(r), GaussianRational(0));
    theta.coords[static_cast<std::size_t>(j)] = GaussianRational(1);
    theta.coords[0] = GaussianRational(Rational(-degrees[static_cast<std::size_t>(j)], degrees[0]));
    if (!radial_contraction(ResidueTensor::from_covector(theta), degrees).is_zero())
      throw std::logic_error("base_family_covectors: radial contraction nonzero");
    out.push_back(std::move(theta));
  }
  return out;
}

std::vector<Covector> perturbation_family(const std::vector<int>& degrees, int n,
                                          const std::vector<std::vector<Rational>>& tau) {
  const int r = static_cast<int>(degrees.size());
  if (n < 4 || r < n) throw std::invalid_argument("perturbation_family: requires r >= n >= 4");
  if (static_cast<int>(tau.size()) != n - 2)
    throw std::invalid_argument("perturbation_family: tau needs n - 2 rows (j = 2..n-1)");
  for (const auto& row : tau)
    if (static_cast<int>(row.size()) != r - n + 1)
      throw std::invalid_argument("perturbation_family: tau rows need r - n + 1 columns (slots n..r)");

  std::vector<Covector> out;
  for (int j = 2; j <= n - 1; ++j) {
    const auto& trow = tau[static_cast<std::size_t>(j - 2)];
    Rational a_j(degrees[static_cast<std::size_t>(j - 1)], degrees[0]);
    for (const Rational& t : trow) a_j -= t;

    Covector theta;
    theta.coords.assign(static_cast<std::size_t>(r), GaussianRational(0));
    theta.coords[static_cast<std::size_t>(j - 1)] = GaussianRational(1);
    theta.coords[0] = GaussianRational(-a_j);
    for (int i = n; i <= r; ++i) {
      Rational b_ji = Rational(degrees[0], degrees[static_cast<std::size_t>(i - 1)]) * trow[static_cast<std::size_t>(i - n)];
      theta.coords[static_cast<std::size_t>(i - 1)] = GaussianRational(-b_ji);
    }
    if (!radial_contraction(ResidueTensor::from_covector(theta), degrees).is_zero())
      throw std::logic_error("perturbation_family: radial contraction nonzero");
    out.push_back(std::move(theta));
  }
  return out;
}

std::vector<GaussianRational> kupka_eigenvalue_system(const std::vector<int>& degrees, int n,
                                                      const std::vector<Rational>& tau) {
  if (static_cast<int>(degrees.size()) != n)
    throw std::invalid_argument("kupka_eigenvalue_system: requires r = n degrees");
  if (static_cast<int>(tau.size()) != n - 2)
    throw std::invalid_argument("kupka_eigenvalue_system: tau needs n - 2 entries (t_2..t_{n-1})");

  ExactMatrix m = ExactMatrix::Constant(n - 1, n, GaussianRational(0));
  for (int col = 0; col < n; ++col) m(0, col) = GaussianRational(1);
  for (int j = 2; j <= n - 1; ++j) {
    const Rational& t = tau[static_cast<std::size_t>(j - 2)];
    Rational a_j = Rational(degrees[static_cast<std::size_t>(j - 1)], degrees[0]) - t;
    Rational b_j = t * Rational(degrees[0], degrees[static_cast<std::size_t>(n - 1)]);
    int row = j - 1;
    m(row, j - 1) = GaussianRational(1);
    m(row, 0) = GaussianRational(-a_j);
    m(row, n - 1) += GaussianRational(-b_j);
  }

  auto basis = kernel_basis(m);
  if (basis.size() != 1)
    throw std::runtime_error("kupka_eigenvalue_system: kernel dimension != 1 (degenerate tau)");
  const ExactVector& v = basis.front();
  return {v.data(), v.data() + v.size()};
}

PoincareVerdict poincare_domain_check(const std::vector<std::complex<double>>& values) {
  if (values.empty()) throw std::invalid_argument("poincare_domain_check: empty list");
  std::vector<double> args;
  args.reserve(values.size());
  for (const auto& v : values) {
    if (v == 0.0) throw std::invalid_argument("poincare_domain_check: zero entry");
    double a = std::arg(v);
    if (a < 0) a += 2.0 * kPi;
    args.push_back(a);
  }
  std::sort(args.begin(), args.end());

  double max_gap = -1.0;
  double gap_start = 0.0;
  for (std::size_t k = 0; k < args.size(); ++k) {
    double next = (k + 1 < args.size()) ? args[k + 1] : args[0] + 2.0 * kPi;
    double gap = next - args[k];
    if (gap > max_gap) {
      max_gap = gap;
      gap_start = args[k];
    }
  }

  PoincareVerdict out;
  out.in_domain = max_gap > kPi + 1e-9;
  if (out.in_domain) {
    // Values occupy the arc [gap_start + max_gap, gap_start + 2 pi]; rotate
    // its midpoint onto the positive real axis.
    double mid = gap_start + max_gap + (2.0 * kPi - max_gap) / 2.0;
    out.witness = std::exp(std::complex<double>(0.0, -mid));
  }
  return out;
}

namespace {

template <typename Scalar, typename EqualityCheck>
NonresonanceVerdict nonresonance_impl(const std::vector<Scalar>& rho,
                                      const std::vector<std::complex<double>>& approx,
                                      const EqualityCheck& relation_holds) {
  PoincareVerdict domain = poincare_domain_check(approx);
  if (!domain.in_domain)
    throw std::invalid_argument("nonresonance_check: values are not in the Poincare domain");

  const std::size_t n = rho.size();
  std::vector<double> w(n);
  double wmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = (domain.witness * approx[i]).real();
    if (w[i] <= 0) throw std::logic_error("nonresonance_check: witness rotation failed");
    wmax = std::max(wmax, w[i]);
  }
  const double bound = wmax + 1e-9;

  NonresonanceVerdict out;
  std::vector<long> m(n, 0);
  for (std::size_t target = 0; target < n; ++target) {
    // Enumerate m over slots != target with sum m_i w_i <= w[target] + tol.
    std::fill(m.begin(), m.end(), 0L);
    double budget = w[target] + 1e-9;
    std::function<bool(std::size_t, double, long)> search = [&](std::size_t slot, double used, long total) -> bool {
      if (slot == n) {
        if (total < 1) return false;
        return relation_holds(target, m);
      }
      if (slot == target) return search(slot + 1, used, total);
      for (long v = 0; used + static_cast<double>(v) * w[slot] <= budget; ++v) {
        m[slot] = v;
        if (search(slot + 1, used + static_cast<double>(v) * w[slot], total + v)) return true;
      }
      m[slot] = 0;
      return false;
    };
    (void)bound;
    if (search(0, 0.0, 0)) {
      out.nonresonant = false;
      ResonanceRelation rel;
      rel.target = static_cast<int>(target);
      rel.coeffs = m;
      out.violation = rel;
      return out;
    }
  }
  out.nonresonant = true;
  return out;
}

}  // namespace

NonresonanceVerdict nonresonance_check(const std::vector<GaussianRational>& rho) {
  std::vector<std::complex<double>> approx;
  approx.reserve(rho.size());
  for (const auto& v : rho) approx.push_back(v.approx());
  return nonresonance_impl(rho, approx, [&](std::size_t target, const std::vector<long>& m) {
    GaussianRational sum(0);
    for (std::size_t i = 0; i < rho.size(); ++i)
      if (i != target && m[i] != 0) sum += GaussianRational(m[i]) * rho[i];
    return sum == rho[target];
  });
}

NonresonanceVerdict nonresonance_check(const std::vector<std::complex<double>>& rho, double tol) {
  return nonresonance_impl(rho, rho, [&](std::size_t target, const std::vector<long>& m) {
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i)
      if (i != target) sum += static_cast<double>(m[i]) * rho[i];
    return std::abs(sum - rho[target]) <= tol;
  });
}

}  // namespace logfol
