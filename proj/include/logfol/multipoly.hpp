#pragma once

#include "logfol/linalg.hpp"
#include "logfol/prng.hpp"
#include "logfol/rational.hpp"

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace logfol {

using ExpVec = std::vector<int>;

inline int total_degree(const ExpVec& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

/// Graded lexicographic order on exponent vectors: first by total degree,
/// ties by lexicographic comparison. The leading term of a polynomial is the
/// maximal term under this order.
struct GradedLexLess {
  bool operator()(const ExpVec& a, const ExpVec& b) const {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

/// Univariate polynomial over Q(i), coefficients stored lowest degree first.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<GaussianRational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static UniPoly zero() { return UniPoly(); }
  static UniPoly constant(GaussianRational c);

  const std::vector<GaussianRational>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero
  const GaussianRational& leading() const { return coeffs_.back(); }

  GaussianRational coeff(int k) const {
    return k >= 0 && k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : GaussianRational(0);
  }

  /// Multiplicity of the root t = 0 (0 if p(0) != 0; degree+1 convention not
  /// used: zero polynomial is rejected by callers).
  int order_at_zero() const;

  UniPoly monic() const;
  std::complex<double> eval(std::complex<double> t) const;

  UniPoly operator-() const;
  UniPoly& operator+=(const UniPoly& o);
  UniPoly& operator-=(const UniPoly& o);
  friend UniPoly operator+(UniPoly a, const UniPoly& b) { a += b; return a; }
  friend UniPoly operator-(UniPoly a, const UniPoly& b) { a -= b; return a; }
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const GaussianRational& c, const UniPoly& p);
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<GaussianRational> coeffs_;
};

/// Remainder of a by b (field division). b must be nonzero.
UniPoly uni_mod(UniPoly a, const UniPoly& b);

/// Monic exact gcd. Throws if both inputs are zero.
UniPoly uni_gcd(UniPoly a, UniPoly b);

/// Sparse multivariate polynomial over Q(i). Terms are kept in graded-lex
/// order with no zero coefficients stored.
class MultiPoly {
 public:
  using TermMap = std::map<ExpVec, GaussianRational, GradedLexLess>;

  explicit MultiPoly(int nvars = 1) : nvars_(nvars) {}

  static MultiPoly zero(int nvars) { return MultiPoly(nvars); }
  static MultiPoly constant(int nvars, const GaussianRational& c);
  static MultiPoly monomial(int nvars, ExpVec exps, const GaussianRational& c);
  static MultiPoly variable(int nvars, int j);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }

  bool is_constant() const;
  GaussianRational constant_value() const;  // 0 for zero polynomial

  /// Max total degree over terms; -1 for the zero polynomial.
  int degree() const;

  const std::pair<const ExpVec, GaussianRational>& leading_term() const;

  void add_term(const ExpVec& e, const GaussianRational& c);

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { a += b; return a; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { a -= b; return a; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(const GaussianRational& c, const MultiPoly& p);
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  MultiPoly derivative(int var) const;

  /// Degree d if every term has total degree d (also checks the Euler
  /// identity sum_j z_j d_j f = d f, which must hold for homogeneous f).
  /// nullopt for inhomogeneous input; throws on the zero polynomial.
  std::optional<int> homogeneous_degree() const;

  std::complex<double> eval(std::span<const std::complex<double>> point) const;
  GaussianRational eval_exact(const ExactVector& point) const;

  /// Substitute z_i = sum_j M(i, j) s_j; M has nvars() rows. The result lives
  /// in M.cols() variables.
  MultiPoly substitute_linear(const ExactMatrix& m) const;

  /// Substitute z_var = 1 (result keeps the same variable count).
  MultiPoly dehomogenize(int var) const;

  /// Remove a variable that no longer occurs.
  MultiPoly drop_var(int var) const;

  /// f(base + t dir) as an exact univariate polynomial in t.
  UniPoly restrict_line(const ExactVector& base, const ExactVector& dir) const;

  std::string to_string() const;  // debugging aid

 private:
  int nvars_;
  TermMap terms_;
};

/// Divisibility with quotient witness: returns q with g = q f when f divides
/// g exactly, nullopt otherwise. Implemented by single-divisor reduction in
/// graded-lex order, which is sound for one divisor: the reduction stops at
/// the first leading term not divisible by lt(f), and such a term is a
/// nonzero remainder term. Throws when f = 0.
std::optional<MultiPoly> divides(const MultiPoly& f, const MultiPoly& g);

/// Determinant of a square matrix of polynomials by fraction-free (Bareiss)
/// elimination; all interior divisions are exact.
MultiPoly poly_det(std::vector<std::vector<MultiPoly>> m);

/// Resultant in t of two polynomials given by their coefficient lists in t
/// (lowest degree first, entries sharing one polynomial ring). Vanishes at a
/// specialization exactly when the specialized polynomials share a root or
/// both leading coefficients vanish. Both inputs need positive degree in t.
MultiPoly sylvester_resultant(std::vector<MultiPoly> a, std::vector<MultiPoly> b);

/// Coefficient list of f in the given variable, lowest degree first; entries
/// keep nvars with the variable's exponent zeroed.
std::vector<MultiPoly> coefficients_in_var(const MultiPoly& f, int var);

/// Dense random polynomial: every monomial of the given total degree gets a
/// nonzero integer coefficient in [-9, 9]. With homogeneous = false, all
/// degrees up to the bound are filled.
MultiPoly random_poly(Rng& rng, int nvars, int degree, bool homogeneous = true);

/// Polynomial compiled to complex double coefficients for fast repeated
/// evaluation in the numeric subsystems.
struct CompiledPoly {
  int nvars = 0;
  std::vector<std::pair<std::complex<double>, ExpVec>> terms;

  std::complex<double> eval(std::span<const std::complex<double>> point) const;
};

CompiledPoly compile(const MultiPoly& f);

}  // namespace logfol
