#pragma once

#include "logfol/tensor.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace logfol {

/// Logarithmic criterion for a cleared form: f_j divides df_j ^ w for every
/// pole. Vacuously true for an empty pole list.
bool is_logarithmic(const PolyForm& w, const PoleSystem& poles);

/// Closedness of the meromorphic form w / prod(f): the denominator-cleared
/// statement F dw = dF ^ w with F = prod f_j, checked exactly on the spec's
/// expanded form.
bool is_closed_log(const LogFoliationSpec& spec);

/// sum(d_j) - p - 1. Throws when negative.
int foliation_degree(const LogFoliationSpec& spec);

/// Degree read off a seeded generic (p+1)-plane restriction: the pullback
/// satisfies i_R(omega) = 0, hence equals i_R(G vol) for a single polynomial
/// G recovered by exact division; returns deg(G). Retries a fresh plane when
/// the pullback degenerates (at most 5 times).
int degree_by_restriction(const LogFoliationSpec& spec, std::uint64_t seed);

struct IntegrabilityVerdict {
  bool tensor_plucker = false;       // all Plucker obstructions vanish
  bool symbolic_wedge_zero = false;  // expanded w ^ w = 0 exactly
};

IntegrabilityVerdict integrability_p2(const LogFoliationSpec& spec);

struct FirstIntegral {
  std::vector<std::pair<MultiPoly, int>> components;  // (f_j, k_j)
};

/// Rational first integral (f_1^k_1, ..., f_{p+1}^k_{p+1}) for r = p+1:
/// k_j = lcm(d)/d_j reduced by the common gcd. Verifies exactly that
/// (d_1 f_1 df_j - d_j f_j df_1) ^ w = 0 for j = 2..p+1.
FirstIntegral first_integral(const LogFoliationSpec& spec);

/// Per-pole invariance verdicts (the Remark criterion, pole by pole).
std::vector<bool> invariant_pole_components(const LogFoliationSpec& spec);

/// Exact projective point solving the given independent linear forms
/// (kernel must be one-dimensional).
ExactVector linear_system_point(const std::vector<MultiPoly>& linear_forms, int nvars);

/// Number of singular points (with multiplicity) of the expanded form on the
/// projective line (f_i = f_j = 0); n = 3, linear poles. Counts the degree of
/// the gcd of the restricted coefficients over both affine charts of the
/// line. Throws "line in singular set" when all coefficients vanish on it.
int line_singularity_count(const LogFoliationSpec& spec, int i, int j);

/// Number of singular points of the restricted foliation on the invariant
/// plane (f_j = 0); n = 3, linear poles. The restriction is the residue
/// 1-form (tensor contracted on slot j, poles restricted to the plane);
/// its zero locus is counted exactly by Sylvester resultants in an affine
/// chart plus the chart's line at infinity.
int plane_singularity_count(const LogFoliationSpec& spec, int j);

struct SingularityReport {
  std::vector<int> per_plane;
  std::vector<int> per_line;
  int triple_points = 0;
  int inclusion_exclusion_total = 0;
  int off_divisor_found = 0;
  std::vector<Eigen::VectorXcd> off_divisor_points;
};

struct AuditOptions {
  std::uint64_t seed = 1;
  int newton_starts = 2000;
  double residual_tol = 1e-8;
  double dedup_tol = 1e-6;
  double off_divisor_tol = 1e-3;
};

/// Full audit of the P^3 six-planes example class: exact per-plane,
/// per-line and triple-point counts with the inclusion-exclusion total,
/// plus a seeded multi-start Newton search for singular points off the
/// pole divisor.
SingularityReport divisor_singularity_audit(const LogFoliationSpec& spec, const AuditOptions& opts);

enum class KupkaKind { regular, kupka, gK, ndgK, degenerate };

std::string to_string(KupkaKind k);

struct KupkaTolerances {
  double zero_tol = 1e-9;
  double fd_step = 1e-6;
};

struct KupkaVerdict {
  KupkaKind kind = KupkaKind::degenerate;
  double omega_mag = 0.0;
  double domega_mag = 0.0;
  std::vector<std::complex<double>> eigenvalues;  // present for gK / ndgK
};

/// Classifies a projective point: evaluates the expanded form and its
/// exterior derivative at the (max-normalized) point; when both vanish and
/// the foliation is two-dimensional, takes the rotational of the affine
/// chart restriction and classifies by the eigenvalues of its finite-
/// difference Jacobian.
KupkaVerdict kupka_classify(const LogFoliationSpec& spec, const Eigen::VectorXcd& point,
                            const KupkaTolerances& tols = {});

/// The tau = 0 family: theta_j = du_j - (d_j/d_1) du_1 on r = p+1 slots,
/// j = 2..p+1.
std::vector<Covector> base_family_covectors(const std::vector<int>& degrees);

/// The perturbation family with parameter table t[j][i] (j = 2..n-1 rows,
/// slots i = n..r columns):
///   theta_j = du_j - A_j du_1 - sum_i B_ji du_i,
///   A_j = d_j/d_1 - sum_i t_ji, B_ji = (d_1/d_i) t_ji.
/// Each output is annihilated by the degree contraction (asserted exactly).
std::vector<Covector> perturbation_family(const std::vector<int>& degrees, int n,
                                          const std::vector<std::vector<Rational>>& tau);

/// Exact solve of the eigenvalue system for r = n:
///   x_1 + ... + x_n = 0,  x_j - A_j x_1 - B_j x_n = 0 (j = 2..n-1),
/// returning (x_1..x_n) normalized so the first nonzero entry is 1. The
/// printed constraint range "1 <= j <= n-2" disagrees with the family's
/// index set; the j = 2..n-1 reading is implemented, and a kernel dimension
/// guard rejects degenerate tau under either reading.
std::vector<GaussianRational> kupka_eigenvalue_system(const std::vector<int>& degrees, int n,
                                                      const std::vector<Rational>& tau);

struct PoincareVerdict {
  bool in_domain = false;
  std::complex<double> witness{1.0, 0.0};  // a with Re(a v_j) > 0 for all j
};

/// True when all values lie in an open half-plane through 0 (maximal angular
/// gap exceeding pi, tolerance 1e-9); the witness rotates the gap's bisector
/// onto the negative axis.
PoincareVerdict poincare_domain_check(const std::vector<std::complex<double>>& values);

struct ResonanceRelation {
  int target = -1;           // j with rho_j = sum_{i != j} m_i rho_i
  std::vector<long> coeffs;  // m_i (entry at target unused, zero)
};

struct NonresonanceVerdict {
  bool nonresonant = false;
  std::optional<ResonanceRelation> violation;
};

/// Enumerates all candidate integer relations inside the Poincare bound and
/// checks them exactly over Q(i).
NonresonanceVerdict nonresonance_check(const std::vector<GaussianRational>& rho);

/// Numeric variant (tolerance 1e-9) for values only known as doubles.
NonresonanceVerdict nonresonance_check(const std::vector<std::complex<double>>& rho,
                                       double tol = 1e-9);

}  // namespace logfol
