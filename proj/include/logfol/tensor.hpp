#pragma once

#include "logfol/forms.hpp"

#include <map>
#include <vector>

namespace logfol {

/// Element of the dual C^r (coefficients against du_1..du_r). Indices are
/// 0-based internally; serialization is 1-based.
struct Covector {
  std::vector<GaussianRational> coords;

  int r() const { return static_cast<int>(coords.size()); }
  bool is_zero() const;
};

/// Element of Lambda^p(C^r*): the numerical-residue data of a logarithmic
/// p-form, keyed by strictly increasing p-tuples of pole indices.
class ResidueTensor {
 public:
  ResidueTensor(int r, int p);

  static ResidueTensor from_covector(const Covector& c);

  int r() const { return r_; }
  int p() const { return p_; }
  bool is_zero() const { return entries_.empty(); }
  const std::map<IndexTuple, GaussianRational>& entries() const { return entries_; }

  GaussianRational entry(const IndexTuple& idx) const;
  void add_entry(const IndexTuple& idx, const GaussianRational& c);

  ResidueTensor operator-() const;
  ResidueTensor& operator+=(const ResidueTensor& o);
  ResidueTensor& operator-=(const ResidueTensor& o);
  friend ResidueTensor operator+(ResidueTensor a, const ResidueTensor& b) { a += b; return a; }
  friend ResidueTensor operator-(ResidueTensor a, const ResidueTensor& b) { a -= b; return a; }
  friend ResidueTensor operator*(const GaussianRational& c, const ResidueTensor& t);
  friend bool operator==(const ResidueTensor& a, const ResidueTensor& b) {
    return a.r_ == b.r_ && a.p_ == b.p_ && a.entries_ == b.entries_;
  }

 private:
  int r_;
  int p_;
  std::map<IndexTuple, GaussianRational> entries_;
};

/// Exterior product in Lambda(C^r*); same sign convention as wedge on forms.
ResidueTensor tensor_wedge(const ResidueTensor& a, const ResidueTensor& b);
ResidueTensor tensor_wedge(const Covector& a, const Covector& b);
ResidueTensor wedge_covectors(const std::vector<Covector>& cs);

/// Interior product with a vector of C^r.
ResidueTensor tensor_contract(const ResidueTensor& a, const std::vector<GaussianRational>& u);

/// Value of a p-tensor on p vectors (iterated contraction, first vector
/// into the first slot).
GaussianRational tensor_apply(const ResidueTensor& a, const std::vector<std::vector<GaussianRational>>& vecs);

/// Basis of {v in C^r : i_v a = 0}; dimension is at most r - p, with
/// equality exactly for decomposable tensors.
std::vector<ExactVector> tensor_kernel(const ResidueTensor& a);

bool is_decomposable(const ResidueTensor& a);

struct Decomposition {
  GaussianRational scale;           // c with c a_1 ^ ... ^ a_p = tensor
  std::vector<Covector> covectors;  // a_1..a_p
};

/// Exact decomposition of a decomposable tensor: the covectors span the
/// annihilator of the kernel, and the result re-wedges to the input exactly.
Decomposition decompose(const ResidueTensor& a);

/// Nonzero decomposability obstructions. For p = 2 these are the Plucker
/// quadric values psi = l_ij l_kl - l_ik l_jl + l_il l_jk over all
/// quadruples i<j<k<l; for other p, the nonzero entries of i_xi(a) ^ a over
/// all basis (p-1)-tuples xi. Empty exactly when the tensor is decomposable.
std::vector<GaussianRational> plucker_defects(const ResidueTensor& a);

struct Corank2Decomposition {
  std::vector<Covector> thetas;  // theta_3..theta_r (r = p+2 of them minus 2)
  GaussianRational scale;        // mu_12^(r-3); thetas wedge to scale * a
};

/// Corank-2 decomposition for r = p+2: covectors built from the pair
/// coefficients mu_kl = lambda_{complement of {k,l}} via rho_k^j =
/// (-1)^(k-1) mu_kj (antisymmetric extension mu_lk = -mu_kl). Requires
/// mu_12 != 0 and a decomposable input; the re-wedge identity
/// theta_3 ^ ... ^ theta_r = mu_12^(r-3) a is verified exactly.
Corank2Decomposition decompose_corank2(const ResidueTensor& a);

/// Contraction against the degree-weighted vector (d_1..d_r); this is the
/// tensor shadow of contracting Phi^p(a) with the radial field.
ResidueTensor radial_contraction(const ResidueTensor& a, const std::vector<int>& degrees);

/// Basis of {a in Lambda^p : radial_contraction(a, degrees) = 0}, i.e. the
/// tensors whose logarithmic forms descend to projective space.
std::vector<ResidueTensor> radial_kernel(const std::vector<int>& degrees, int r, int p);

/// Homogeneous pole data f_1..f_r on C^(n+1).
struct PoleSystem {
  int n = 0;                    // projective dimension; polynomials live in n+1 variables
  std::vector<MultiPoly> polys;
  std::vector<int> degrees;

  int r() const { return static_cast<int>(polys.size()); }
  int nvars() const { return n + 1; }
  MultiPoly product() const;

  /// Checks each f_j is homogeneous of its declared degree (Euler-verified)
  /// and that the f_j are pairwise non-proportional. Throws on violation.
  void validate() const;
};

PoleSystem make_pole_system(int n, std::vector<MultiPoly> polys);

/// A logarithmic foliation datum: poles plus residue tensor.
struct LogFoliationSpec {
  PoleSystem poles;
  ResidueTensor tensor;

  LogFoliationSpec(PoleSystem p, ResidueTensor t);

  int n() const { return poles.n; }
  int p() const { return tensor.p(); }
  int r() const { return poles.r(); }

  /// True when the tensor is annihilated by the degree-weighted contraction
  /// (i_R eta = 0, the condition for descending to P^n).
  bool is_projective() const;
};

/// The cleared polynomial form
///   w = sum_I lambda_I (prod_{j not in I} f_j) df_{i_1} ^ ... ^ df_{i_p},
/// whose coefficients are homogeneous of degree (sum_j d_j) - p.
PolyForm expand(const LogFoliationSpec& spec);

/// Pole j removed: restricted tensor i_{e_j}(a) reindexed to r-1 slots.
ResidueTensor drop_pole(const ResidueTensor& a, int j);

/// Random tensors for tests and seeded corpora.
ResidueTensor random_tensor(Rng& rng, int r, int p);
Covector random_covector(Rng& rng, int r);
ResidueTensor random_decomposable(Rng& rng, int r, int p);

}  // namespace logfol
