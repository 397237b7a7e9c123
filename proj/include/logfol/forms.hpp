#pragma once

#include "logfol/multipoly.hpp"

#include <map>
#include <optional>
#include <vector>

namespace logfol {

/// Strictly increasing index tuple keying a form coefficient.
using IndexTuple = std::vector<int>;

/// Merge two strictly increasing tuples, counting transpositions. Returns
/// nullopt when they share an index (the wedge vanishes); otherwise the sign
/// of the shuffle and the merged tuple.
std::optional<std::pair<int, IndexTuple>> merge_tuples(const IndexTuple& a, const IndexTuple& b);

/// Alternating p-form with polynomial coefficients, stored sparsely on
/// strictly increasing index tuples. p = 0 is a plain polynomial keyed by the
/// empty tuple.
class PolyForm {
 public:
  using CoeffMap = std::map<IndexTuple, MultiPoly>;

  PolyForm(int nvars, int degree);

  static PolyForm zero(int nvars, int degree) { return PolyForm(nvars, degree); }
  static PolyForm from_poly(const MultiPoly& f);

  /// dz_j as a 1-form.
  static PolyForm basis_one_form(int nvars, int j);

  int nvars() const { return nvars_; }
  int form_degree() const { return degree_; }
  bool is_zero() const { return coeffs_.empty(); }
  const CoeffMap& coefficients() const { return coeffs_; }

  const MultiPoly* coefficient(const IndexTuple& idx) const;
  void add_term(const IndexTuple& idx, const MultiPoly& c);

  PolyForm operator-() const;
  PolyForm& operator+=(const PolyForm& o);
  PolyForm& operator-=(const PolyForm& o);
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { a += b; return a; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { a -= b; return a; }
  friend PolyForm operator*(const MultiPoly& f, const PolyForm& w);
  friend PolyForm operator*(const GaussianRational& c, const PolyForm& w);
  friend bool operator==(const PolyForm& a, const PolyForm& b) {
    return a.nvars_ == b.nvars_ && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int nvars_;
  int degree_;
  CoeffMap coeffs_;
};

/// Polynomial vector field: one component per variable.
struct PolyVectorField {
  std::vector<MultiPoly> components;

  int nvars() const { return static_cast<int>(components.size()); }
  bool is_zero() const;
};

/// The radial field R = sum_j z_j d/dz_j.
PolyVectorField radial_field(int nvars);

/// Exterior product; sign fixed by merging index tuples with transposition
/// counting.
PolyForm wedge(const PolyForm& a, const PolyForm& b);

/// d(sum f_I dz_I) = sum_j d_j f_I dz_j ^ dz_I.
PolyForm exterior_derivative(const PolyForm& a);

/// Interior product i_X a, with
/// i_X(dz_{i_1}^...^dz_{i_p}) = sum_k (-1)^{k-1} X_{i_k} dz_{I minus i_k}.
PolyForm contract(const PolyForm& a, const PolyVectorField& x);

/// Pullback along the linear map z = M s (M full column rank; columns are
/// the new variables). Coefficients are substituted and dz_i expands to
/// sum_j M(i,j) ds_j.
PolyForm pullback_linear(const PolyForm& a, const ExactMatrix& m);

/// Restriction to the affine chart {z_var = 1}: substitutes z_var = 1, drops
/// dz_var terms and removes the variable. Indices above var shift down.
PolyForm affine_chart(const PolyForm& a, int var);

/// Rotational of an (nvars-2)-form: the field X with d w = i_X nu for
/// nu = dz_0 ^ ... ^ dz_{nvars-1}. With ascending nu, the coefficient of
/// dz_0^...(omit k)...^dz_{nvars-1} in dw equals (-1)^k X_k.
PolyVectorField rotational(const PolyForm& w);

/// Coefficientwise numeric evaluation of a form at a point.
struct EvaluatedForm {
  int nvars = 0;
  int degree = 0;
  std::map<IndexTuple, std::complex<double>> coeffs;

  double max_abs() const;

  /// Apply the alternating tensor to `degree` tangent vectors.
  std::complex<double> apply(const std::vector<Eigen::VectorXcd>& vectors) const;
};

EvaluatedForm evaluate(const PolyForm& a, const Eigen::VectorXcd& point);

/// Form compiled for repeated numeric evaluation.
struct CompiledForm {
  int nvars = 0;
  int degree = 0;
  std::vector<std::pair<IndexTuple, CompiledPoly>> coeffs;

  EvaluatedForm eval(const Eigen::VectorXcd& point) const;
};

CompiledForm compile(const PolyForm& a);

/// Random p-form with dense random homogeneous coefficients of the given
/// polynomial degree on every index tuple.
PolyForm random_form(Rng& rng, int nvars, int p, int coeff_degree);

}  // namespace logfol
