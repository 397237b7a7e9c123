#include "logfol/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace logfol {

namespace {

std::vector<IndexTuple> increasing_tuples(int r, int p) {
  std::vector<IndexTuple> out;
  if (p < 0 || p > r) return out;
  IndexTuple idx(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(idx);
    int i = p - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == r - p + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < p; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  if (p == 0) out.assign(1, IndexTuple{});
  return out;
}

}  // namespace

bool Covector::is_zero() const {
  for (const auto& c : coords)
    if (!c.is_zero()) return false;
  return true;
}

ResidueTensor::ResidueTensor(int r, int p) : r_(r), p_(p) {
  if (r < 1 || p < 0 || p > r) throw std::invalid_argument("ResidueTensor: bad (r, p)");
}

ResidueTensor ResidueTensor::from_covector(const Covector& c) {
  ResidueTensor t(c.r(), 1);
  for (int j = 0; j < c.r(); ++j) t.add_entry({j}, c.coords[static_cast<std::size_t>(j)]);
  return t;
}

GaussianRational ResidueTensor::entry(const IndexTuple& idx) const {
  auto it = entries_.find(idx);
  return it == entries_.end() ? GaussianRational(0) : it->second;
}

void ResidueTensor::add_entry(const IndexTuple& idx, const GaussianRational& c) {
  if (c.is_zero()) return;
  if (static_cast<int>(idx.size()) != p_)
    throw std::invalid_argument("ResidueTensor::add_entry: tuple length mismatch");
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= r_) throw std::invalid_argument("ResidueTensor::add_entry: index out of range");
    if (k > 0 && idx[k] <= idx[k - 1])
      throw std::invalid_argument("ResidueTensor::add_entry: tuple not strictly increasing");
  }
  auto [it, inserted] = entries_.emplace(idx, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

ResidueTensor ResidueTensor::operator-() const {
  ResidueTensor out(r_, p_);
  for (const auto& [idx, c] : entries_) out.entries_.emplace(idx, -c);
  return out;
}

ResidueTensor& ResidueTensor::operator+=(const ResidueTensor& o) {
  if (r_ != o.r_ || p_ != o.p_) throw std::invalid_argument("ResidueTensor: shape mismatch");
  for (const auto& [idx, c] : o.entries_) add_entry(idx, c);
  return *this;
}

ResidueTensor& ResidueTensor::operator-=(const ResidueTensor& o) {
  if (r_ != o.r_ || p_ != o.p_) throw std::invalid_argument("ResidueTensor: shape mismatch");
  for (const auto& [idx, c] : o.entries_) add_entry(idx, -c);
  return *this;
}

ResidueTensor operator*(const GaussianRational& c, const ResidueTensor& t) {
  ResidueTensor out(t.r_, t.p_);
  if (c.is_zero()) return out;
  for (const auto& [idx, x] : t.entries_) out.entries_.emplace(idx, c * x);
  return out;
}

ResidueTensor tensor_wedge(const ResidueTensor& a, const ResidueTensor& b) {
  if (a.r() != b.r()) throw std::invalid_argument("tensor_wedge: r mismatch");
  if (a.p() + b.p() > a.r())
    return ResidueTensor(a.r(), a.r());  // zero: no tuples of that length survive
  ResidueTensor out(a.r(), a.p() + b.p());
  for (const auto& [ia, ca] : a.entries()) {
    for (const auto& [ib, cb] : b.entries()) {
      auto merged = merge_tuples(ia, ib);
      if (!merged) continue;
      GaussianRational c = ca * cb;
      out.add_entry(merged->second, merged->first < 0 ? -c : c);
    }
  }
  return out;
}

ResidueTensor tensor_wedge(const Covector& a, const Covector& b) {
  return tensor_wedge(ResidueTensor::from_covector(a), ResidueTensor::from_covector(b));
}

ResidueTensor wedge_covectors(const std::vector<Covector>& cs) {
  if (cs.empty()) throw std::invalid_argument("wedge_covectors: empty list");
  ResidueTensor acc = ResidueTensor::from_covector(cs.front());
  for (std::size_t k = 1; k < cs.size(); ++k)
    acc = tensor_wedge(acc, ResidueTensor::from_covector(cs[k]));
  return acc;
}

ResidueTensor tensor_contract(const ResidueTensor& a, const std::vector<GaussianRational>& u) {
  if (static_cast<int>(u.size()) != a.r()) throw std::invalid_argument("tensor_contract: r mismatch");
  if (a.p() < 1) throw std::invalid_argument("tensor_contract: degree-0 tensor");
  ResidueTensor out(a.r(), a.p() - 1);
  for (const auto& [idx, c] : a.entries()) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const GaussianRational& uk = u[static_cast<std::size_t>(idx[k])];
      if (uk.is_zero()) continue;
      IndexTuple rest;
      rest.reserve(idx.size() - 1);
      for (std::size_t l = 0; l < idx.size(); ++l)
        if (l != k) rest.push_back(idx[l]);
      GaussianRational t = uk * c;
      out.add_entry(rest, (k % 2 != 0) ? -t : t);
    }
  }
  return out;
}

GaussianRational tensor_apply(const ResidueTensor& a, const std::vector<std::vector<GaussianRational>>& vecs) {
  if (static_cast<int>(vecs.size()) != a.p()) throw std::invalid_argument("tensor_apply: arity mismatch");
  ResidueTensor cur = a;
  for (const auto& v : vecs) cur = tensor_contract(cur, v);
  return cur.entry({});
}

std::vector<ExactVector> tensor_kernel(const ResidueTensor& a) {
  if (a.is_zero()) throw std::invalid_argument("tensor_kernel: zero tensor");
  const int r = a.r();
  std::vector<IndexTuple> rows = increasing_tuples(r, a.p() - 1);
  std::map<IndexTuple, int> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = static_cast<int>(i);

  ExactMatrix m = ExactMatrix::Constant(static_cast<int>(rows.size()), r, GaussianRational(0));
  // Column j holds i_{e_j} a.
  for (const auto& [idx, c] : a.entries()) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      IndexTuple rest;
      rest.reserve(idx.size() - 1);
      for (std::size_t l = 0; l < idx.size(); ++l)
        if (l != k) rest.push_back(idx[l]);
      GaussianRational v = (k % 2 != 0) ? -c : c;
      m(row_of.at(rest), idx[k]) += v;
    }
  }
  return kernel_basis(m);
}

bool is_decomposable(const ResidueTensor& a) {
  return static_cast<int>(tensor_kernel(a).size()) == a.r() - a.p();
}

Decomposition decompose(const ResidueTensor& a) {
  if (!is_decomposable(a)) throw std::invalid_argument("decompose: tensor is not decomposable");
  const int r = a.r();
  const int p = a.p();

  std::vector<ExactVector> ker = tensor_kernel(a);
  // Covectors spanning the annihilator of the kernel.
  ExactMatrix w = ExactMatrix::Constant(static_cast<int>(ker.size()), r, GaussianRational(0));
  for (std::size_t i = 0; i < ker.size(); ++i)
    for (int j = 0; j < r; ++j) w(static_cast<int>(i), j) = ker[i](j);
  std::vector<ExactVector> ann = kernel_basis(w);
  if (static_cast<int>(ann.size()) != p) throw std::logic_error("decompose: annihilator dimension mismatch");

  Decomposition out;
  for (const auto& v : ann) {
    Covector c;
    c.coords.assign(v.data(), v.data() + v.size());
    out.covectors.push_back(std::move(c));
  }
  ResidueTensor mu = wedge_covectors(out.covectors);

  // Scale factor from any shared nonzero entry, then exact verification.
  GaussianRational c(0);
  for (const auto& [idx, v] : a.entries()) {
    GaussianRational m = mu.entry(idx);
    if (!m.is_zero()) {
      c = v / m;
      break;
    }
  }
  if (c.is_zero() || !(c * mu == a)) throw std::logic_error("decompose: re-wedge verification failed");
  out.scale = c;

  if (p == 2) {
    // Cross-check against i_u / i_v applied to basis vectors u, v with
    // a(u, v) != 0.
    const auto& [idx0, v0] = *a.entries().begin();
    std::vector<GaussianRational> u(static_cast<std::size_t>(r), GaussianRational(0));
    std::vector<GaussianRational> v(static_cast<std::size_t>(r), GaussianRational(0));
    u[static_cast<std::size_t>(idx0[0])] = GaussianRational(1);
    v[static_cast<std::size_t>(idx0[1])] = GaussianRational(1);
    ResidueTensor cross = tensor_wedge(tensor_contract(a, u), tensor_contract(a, v));
    if (!(inverse(v0) * cross == a)) throw std::logic_error("decompose: p=2 cross-check failed");
  }
  return out;
}

std::vector<GaussianRational> plucker_defects(const ResidueTensor& a) {
  if (a.is_zero()) throw std::invalid_argument("plucker_defects: zero tensor");
  std::vector<GaussianRational> out;
  const int r = a.r();
  const int p = a.p();
  if (p == 1 || p == r) return out;  // always decomposable
  if (p == 2) {
    for (const IndexTuple& q : increasing_tuples(r, 4)) {
      int i = q[0], j = q[1], k = q[2], l = q[3];
      GaussianRational psi = a.entry({i, j}) * a.entry({k, l}) - a.entry({i, k}) * a.entry({j, l}) +
                             a.entry({i, l}) * a.entry({j, k});
      if (!psi.is_zero()) out.push_back(psi);
    }
    return out;
  }
  for (const IndexTuple& xi : increasing_tuples(r, p - 1)) {
    ResidueTensor cur = a;
    for (auto it = xi.rbegin(); it != xi.rend(); ++it) {
      std::vector<GaussianRational> e(static_cast<std::size_t>(r), GaussianRational(0));
      e[static_cast<std::size_t>(*it)] = GaussianRational(1);
      cur = tensor_contract(cur, e);
    }
    ResidueTensor obstruction = tensor_wedge(cur, a);
    for (const auto& [idx, c] : obstruction.entries()) out.push_back(c);
  }
  return out;
}

Corank2Decomposition decompose_corank2(const ResidueTensor& a) {
  const int r = a.r();
  const int p = a.p();
  if (r != p + 2) throw std::invalid_argument("decompose_corank2: requires r = p + 2");
  if (!is_decomposable(a)) throw std::invalid_argument("decompose_corank2: tensor is not decomposable");

  // Pair coefficients mu_kl = lambda_{complement of {k,l}}, antisymmetric in
  // (k, l).
  auto mu = [&](int k, int l) -> GaussianRational {
    if (k == l) return GaussianRational(0);
    bool flip = k > l;
    if (flip) std::swap(k, l);
    IndexTuple complement;
    complement.reserve(static_cast<std::size_t>(p));
    for (int i = 0; i < r; ++i)
      if (i != k && i != l) complement.push_back(i);
    GaussianRational v = a.entry(complement);
    return flip ? -v : v;
  };
  // rho_k^j = (-1)^(k-1) mu_kj with 1-based k; 0-based below.
  auto rho = [&](int k, int j) -> GaussianRational {
    GaussianRational v = mu(k, j);
    return (k % 2 != 0) ? v : -v;  // 0-based k even <=> 1-based k odd
  };

  GaussianRational mu12 = mu(0, 1);
  if (mu12.is_zero())
    throw std::invalid_argument(
        "decompose_corank2: mu_12 = 0; renumber the poles so the entry on {3..r} is nonzero");

  Corank2Decomposition out;
  for (int j = 2; j < r; ++j) {
    // theta_j = rho_j^2 du_1 + rho_j^1 du_2 - rho_2^1 du_j. The source
    // formula reads rho_j^2 du_1 - rho_j^1 du_2 + rho_2^1 du_j, but that
    // variant rests on rho_1^2 = -rho_2^1, which contradicts the stated
    // conventions (both equal mu_12); with the signs below each theta_j is
    // annihilated by both tangent fields Y^1, Y^2 and the closing identity
    // holds with the exact constant mu_12^(r-3) for every r. Pinned by
    // exact tests.
    Covector theta;
    theta.coords.assign(static_cast<std::size_t>(r), GaussianRational(0));
    theta.coords[0] = rho(j, 1);
    theta.coords[1] = rho(j, 0);
    theta.coords[static_cast<std::size_t>(j)] = -rho(1, 0);
    out.thetas.push_back(std::move(theta));
  }

  GaussianRational scale(1);
  for (int k = 0; k < r - 3; ++k) scale *= mu12;
  out.scale = scale;

  if (!(wedge_covectors(out.thetas) == scale * a))
    throw std::logic_error("decompose_corank2: closing identity failed");
  return out;
}

ResidueTensor radial_contraction(const ResidueTensor& a, const std::vector<int>& degrees) {
  if (static_cast<int>(degrees.size()) != a.r())
    throw std::invalid_argument("radial_contraction: degree list length mismatch");
  std::vector<GaussianRational> u;
  u.reserve(degrees.size());
  for (int d : degrees) u.emplace_back(d);
  return tensor_contract(a, u);
}

std::vector<ResidueTensor> radial_kernel(const std::vector<int>& degrees, int r, int p) {
  if (static_cast<int>(degrees.size()) != r) throw std::invalid_argument("radial_kernel: degree list length mismatch");
  if (p > r || p < 1) throw std::invalid_argument("radial_kernel: bad p");
  std::vector<IndexTuple> cols = increasing_tuples(r, p);
  std::vector<IndexTuple> rows = increasing_tuples(r, p - 1);
  std::map<IndexTuple, int> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = static_cast<int>(i);

  ExactMatrix m = ExactMatrix::Constant(static_cast<int>(rows.size()), static_cast<int>(cols.size()),
                                        GaussianRational(0));
  for (std::size_t col = 0; col < cols.size(); ++col) {
    const IndexTuple& idx = cols[col];
    for (std::size_t k = 0; k < idx.size(); ++k) {
      IndexTuple rest;
      rest.reserve(idx.size() - 1);
      for (std::size_t l = 0; l < idx.size(); ++l)
        if (l != k) rest.push_back(idx[l]);
      GaussianRational v(degrees[static_cast<std::size_t>(idx[k])]);
      m(row_of.at(rest), static_cast<int>(col)) += (k % 2 != 0) ? -v : v;
    }
  }

  std::vector<ResidueTensor> out;
  for (const ExactVector& v : kernel_basis(m)) {
    ResidueTensor t(r, p);
    for (std::size_t col = 0; col < cols.size(); ++col) t.add_entry(cols[col], v(static_cast<int>(col)));
    out.push_back(std::move(t));
  }
  return out;
}

MultiPoly PoleSystem::product() const {
  MultiPoly f = MultiPoly::constant(nvars(), GaussianRational(1));
  for (const auto& p : polys) f = f * p;
  return f;
}

void PoleSystem::validate() const {
  if (n < 1) throw std::invalid_argument("PoleSystem: projective dimension must be >= 1");
  if (polys.size() != degrees.size()) throw std::invalid_argument("PoleSystem: degree list length mismatch");
  for (std::size_t j = 0; j < polys.size(); ++j) {
    if (polys[j].nvars() != nvars())
      throw std::invalid_argument("PoleSystem: polynomial has wrong variable count");
    if (polys[j].is_zero()) throw std::invalid_argument("PoleSystem: zero pole polynomial");
    auto d = polys[j].homogeneous_degree();
    if (!d) throw std::invalid_argument("PoleSystem: pole polynomial is not homogeneous");
    if (*d != degrees[j]) throw std::invalid_argument("PoleSystem: declared degree mismatch");
  }
  // Pairwise non-proportional: f_i ~ f_j iff lc_j f_i - lc_i f_j = 0.
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (std::size_t j = i + 1; j < polys.size(); ++j) {
      if (degrees[i] != degrees[j]) continue;
      const GaussianRational& li = polys[i].leading_term().second;
      const GaussianRational& lj = polys[j].leading_term().second;
      if (lj * polys[i] - li * polys[j] == MultiPoly::zero(nvars()))
        throw std::invalid_argument("PoleSystem: pairwise non-proportional violated");
    }
}

PoleSystem make_pole_system(int n, std::vector<MultiPoly> polys) {
  PoleSystem ps;
  ps.n = n;
  ps.polys = std::move(polys);
  ps.degrees.reserve(ps.polys.size());
  for (const auto& f : ps.polys) {
    auto d = f.homogeneous_degree();
    if (!d) throw std::invalid_argument("make_pole_system: inhomogeneous pole");
    ps.degrees.push_back(*d);
  }
  ps.validate();
  return ps;
}

LogFoliationSpec::LogFoliationSpec(PoleSystem p, ResidueTensor t)
    : poles(std::move(p)), tensor(std::move(t)) {
  if (tensor.r() != poles.r())
    throw std::invalid_argument("LogFoliationSpec: tensor r does not match pole count");
}

bool LogFoliationSpec::is_projective() const {
  return radial_contraction(tensor, poles.degrees).is_zero();
}

PolyForm expand(const LogFoliationSpec& spec) {
  const int nv = spec.poles.nvars();
  const int p = spec.p();
  PolyForm out(nv, p);

  // d f_j, precomputed.
  std::vector<PolyForm> df;
  df.reserve(spec.poles.polys.size());
  for (const auto& f : spec.poles.polys) df.push_back(exterior_derivative(PolyForm::from_poly(f)));

  for (const auto& [idx, lambda] : spec.tensor.entries()) {
    MultiPoly cofactor = MultiPoly::constant(nv, lambda);
    for (int j = 0; j < spec.r(); ++j)
      if (std::find(idx.begin(), idx.end(), j) == idx.end()) cofactor = cofactor * spec.poles.polys[static_cast<std::size_t>(j)];
    PolyForm w = PolyForm::from_poly(MultiPoly::constant(nv, GaussianRational(1)));
    for (int i : idx) w = wedge(w, df[static_cast<std::size_t>(i)]);
    out += cofactor * w;
  }

  // Every coefficient is homogeneous of degree sum(d_j) - p.
  int expected = -p;
  for (int d : spec.poles.degrees) expected += d;
  for (const auto& [idx, c] : out.coefficients()) {
    auto d = c.homogeneous_degree();
    if (!d || *d != expected) throw std::logic_error("expand: coefficient degree check failed");
  }
  return out;
}

ResidueTensor drop_pole(const ResidueTensor& a, int j) {
  if (j < 0 || j >= a.r()) throw std::out_of_range("drop_pole: pole index");
  std::vector<GaussianRational> e(static_cast<std::size_t>(a.r()), GaussianRational(0));
  e[static_cast<std::size_t>(j)] = GaussianRational(1);
  ResidueTensor contracted = tensor_contract(a, e);
  ResidueTensor out(a.r() - 1, a.p() - 1);
  for (const auto& [idx, c] : contracted.entries()) {
    IndexTuple shifted;
    shifted.reserve(idx.size());
    for (int i : idx) shifted.push_back(i > j ? i - 1 : i);
    out.add_entry(shifted, c);
  }
  return out;
}

ResidueTensor random_tensor(Rng& rng, int r, int p) {
  ResidueTensor t(r, p);
  for (const IndexTuple& idx : increasing_tuples(r, p)) t.add_entry(idx, GaussianRational(rng.int_in(-9, 9)));
  if (t.is_zero()) t.add_entry(increasing_tuples(r, p).front(), GaussianRational(1));
  return t;
}

Covector random_covector(Rng& rng, int r) {
  Covector c;
  c.coords.reserve(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) c.coords.emplace_back(rng.nonzero_int(9));
  return c;
}

ResidueTensor random_decomposable(Rng& rng, int r, int p) {
  while (true) {
    std::vector<Covector> cs;
    cs.reserve(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) cs.push_back(random_covector(rng, r));
    ResidueTensor t = wedge_covectors(cs);
    if (!t.is_zero()) return t;
  }
}

}  // namespace logfol
