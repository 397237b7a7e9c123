#include "logfol/multipoly.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace logfol {

// ---------------------------------------------------------------------------
// UniPoly

void UniPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

UniPoly UniPoly::constant(GaussianRational c) {
  UniPoly p;
  if (!c.is_zero()) p.coeffs_.push_back(std::move(c));
  return p;
}

int UniPoly::order_at_zero() const {
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (!coeffs_[k].is_zero()) return static_cast<int>(k);
  return 0;
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  return inverse(leading()) * *this;
}

std::complex<double> UniPoly::eval(std::complex<double> t) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + it->approx();
  return acc;
}

UniPoly UniPoly::operator-() const {
  UniPoly out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) {
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return UniPoly();
  std::vector<GaussianRational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return UniPoly(std::move(out));
}

UniPoly operator*(const GaussianRational& c, const UniPoly& p) {
  if (c.is_zero()) return UniPoly();
  UniPoly out = p;
  for (auto& x : out.coeffs_) x *= c;
  return out;
}

UniPoly uni_mod(UniPoly a, const UniPoly& b) {
  if (b.is_zero()) throw std::invalid_argument("uni_mod: zero divisor");
  while (!a.is_zero() && a.degree() >= b.degree()) {
    GaussianRational q = a.leading() / b.leading();
    int shift = a.degree() - b.degree();
    std::vector<GaussianRational> sub(static_cast<std::size_t>(shift + b.degree() + 1));
    for (int k = 0; k <= b.degree(); ++k) sub[static_cast<std::size_t>(k + shift)] = q * b.coeff(k);
    a -= UniPoly(std::move(sub));
  }
  return a;
}

UniPoly uni_gcd(UniPoly a, UniPoly b) {
  if (a.is_zero() && b.is_zero()) throw std::invalid_argument("uni_gcd: both inputs zero");
  while (!b.is_zero()) {
    UniPoly r = uni_mod(std::move(a), b);
    a = b.monic();
    b = r.monic();
  }
  return a.monic();
}

// ---------------------------------------------------------------------------
// MultiPoly

MultiPoly MultiPoly::constant(int nvars, const GaussianRational& c) {
  MultiPoly p(nvars);
  if (!c.is_zero()) p.terms_.emplace(ExpVec(nvars, 0), c);
  return p;
}

MultiPoly MultiPoly::monomial(int nvars, ExpVec exps, const GaussianRational& c) {
  if (static_cast<int>(exps.size()) != nvars)
    throw std::invalid_argument("MultiPoly::monomial: exponent vector length mismatch");
  MultiPoly p(nvars);
  if (!c.is_zero()) p.terms_.emplace(std::move(exps), c);
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int j) {
  ExpVec e(nvars, 0);
  e.at(j) = 1;
  return monomial(nvars, std::move(e), GaussianRational(1));
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

GaussianRational MultiPoly::constant_value() const {
  ExpVec zero(nvars_, 0);
  auto it = terms_.find(zero);
  return it == terms_.end() ? GaussianRational(0) : it->second;
}

int MultiPoly::degree() const {
  if (terms_.empty()) return -1;
  return total_degree(terms_.rbegin()->first);
}

const std::pair<const ExpVec, GaussianRational>& MultiPoly::leading_term() const {
  if (terms_.empty()) throw std::logic_error("leading_term of zero polynomial");
  return *terms_.rbegin();
}

void MultiPoly::add_term(const ExpVec& e, const GaussianRational& c) {
  if (c.is_zero()) return;
  if (static_cast<int>(e.size()) != nvars_)
    throw std::invalid_argument("MultiPoly::add_term: exponent vector length mismatch");
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (nvars_ != o.nvars_) throw std::invalid_argument("MultiPoly: nvars mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (nvars_ != o.nvars_) throw std::invalid_argument("MultiPoly: nvars mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("MultiPoly: nvars mismatch");
  MultiPoly out(a.nvars_);
  ExpVec e(static_cast<std::size_t>(a.nvars_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) e[static_cast<std::size_t>(i)] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

MultiPoly operator*(const GaussianRational& c, const MultiPoly& p) {
  if (c.is_zero()) return MultiPoly::zero(p.nvars_);
  MultiPoly out = p;
  for (auto& [e, x] : out.terms_) x *= c;
  return out;
}

MultiPoly MultiPoly::derivative(int var) const {
  if (var < 0 || var >= nvars_) throw std::out_of_range("MultiPoly::derivative: variable index");
  MultiPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    ExpVec d = e;
    --d[var];
    out.add_term(d, GaussianRational(e[var]) * c);
  }
  return out;
}

std::optional<int> MultiPoly::homogeneous_degree() const {
  if (terms_.empty()) throw std::invalid_argument("homogeneous_degree: zero polynomial");
  int d = total_degree(terms_.begin()->first);
  for (const auto& [e, c] : terms_)
    if (total_degree(e) != d) return std::nullopt;
  // Euler identity cross-check: sum_j z_j df/dz_j = d f.
  MultiPoly euler(nvars_);
  for (int j = 0; j < nvars_; ++j) euler += variable(nvars_, j) * derivative(j);
  if (!(euler == GaussianRational(d) * *this))
    throw std::logic_error("homogeneous_degree: Euler identity violated");
  return d;
}

std::complex<double> MultiPoly::eval(std::span<const std::complex<double>> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw std::invalid_argument("MultiPoly::eval: point dimension mismatch");
  std::complex<double> acc = 0.0;
  for (const auto& [e, c] : terms_) {
    std::complex<double> t = c.approx();
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[static_cast<std::size_t>(i)];
    acc += t;
  }
  return acc;
}

GaussianRational MultiPoly::eval_exact(const ExactVector& point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw std::invalid_argument("MultiPoly::eval_exact: point dimension mismatch");
  GaussianRational acc(0);
  for (const auto& [e, c] : terms_) {
    GaussianRational t = c;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= point(i);
    acc += t;
  }
  return acc;
}

MultiPoly MultiPoly::substitute_linear(const ExactMatrix& m) const {
  if (static_cast<int>(m.rows()) != nvars_)
    throw std::invalid_argument("substitute_linear: matrix row count must equal nvars");
  const int new_nvars = static_cast<int>(m.cols());

  // Linear images of the variables, with memoized powers.
  std::vector<MultiPoly> image;
  image.reserve(static_cast<std::size_t>(nvars_));
  for (int i = 0; i < nvars_; ++i) {
    MultiPoly li(new_nvars);
    for (int j = 0; j < new_nvars; ++j)
      li += m(i, j) * MultiPoly::variable(new_nvars, j);
    image.push_back(std::move(li));
  }
  std::vector<std::vector<MultiPoly>> powers(static_cast<std::size_t>(nvars_));
  auto power = [&](int i, int k) -> const MultiPoly& {
    auto& cache = powers[static_cast<std::size_t>(i)];
    if (cache.empty()) cache.push_back(MultiPoly::constant(new_nvars, GaussianRational(1)));
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * image[static_cast<std::size_t>(i)]);
    return cache[static_cast<std::size_t>(k)];
  };

  MultiPoly out(new_nvars);
  for (const auto& [e, c] : terms_) {
    MultiPoly t = MultiPoly::constant(new_nvars, c);
    for (int i = 0; i < nvars_; ++i)
      if (e[i] > 0) t = t * power(i, e[i]);
    out += t;
  }
  return out;
}

MultiPoly MultiPoly::dehomogenize(int var) const {
  MultiPoly out(nvars_);
  for (const auto& [e, c] : terms_) {
    ExpVec d = e;
    d[var] = 0;
    out.add_term(d, c);
  }
  return out;
}

MultiPoly MultiPoly::drop_var(int var) const {
  MultiPoly out(nvars_ - 1);
  for (const auto& [e, c] : terms_) {
    if (e[var] != 0) throw std::logic_error("drop_var: variable still occurs");
    ExpVec d;
    d.reserve(static_cast<std::size_t>(nvars_ - 1));
    for (int i = 0; i < nvars_; ++i)
      if (i != var) d.push_back(e[i]);
    out.add_term(d, c);
  }
  return out;
}

UniPoly MultiPoly::restrict_line(const ExactVector& base, const ExactVector& dir) const {
  if (static_cast<int>(base.size()) != nvars_ || static_cast<int>(dir.size()) != nvars_)
    throw std::invalid_argument("restrict_line: dimension mismatch");
  bool dir_zero = true;
  for (int i = 0; i < nvars_; ++i)
    if (!dir(i).is_zero()) dir_zero = false;
  if (dir_zero) throw std::invalid_argument("restrict_line: zero direction");

  // Memoized powers of (base_i + t dir_i).
  std::vector<std::vector<UniPoly>> powers(static_cast<std::size_t>(nvars_));
  auto power = [&](int i, int k) -> const UniPoly& {
    auto& cache = powers[static_cast<std::size_t>(i)];
    if (cache.empty()) {
      cache.push_back(UniPoly::constant(GaussianRational(1)));
      cache.push_back(UniPoly({base(i), dir(i)}));
    }
    while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * cache[1]);
    return cache[static_cast<std::size_t>(k)];
  };

  UniPoly out;
  for (const auto& [e, c] : terms_) {
    UniPoly t = UniPoly::constant(c);
    for (int i = 0; i < nvars_; ++i)
      if (e[i] > 0) t = t * power(i, e[i]);
    out += t;
  }
  return out;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << "(" << format_scalar(it->second) << ")";
    for (int i = 0; i < nvars_; ++i)
      if (it->first[i] > 0) {
        os << "*z" << i;
        if (it->first[i] > 1) os << "^" << it->first[i];
      }
  }
  return os.str();
}

std::optional<MultiPoly> divides(const MultiPoly& f, const MultiPoly& g) {
  if (f.is_zero()) throw std::invalid_argument("divides: zero divisor");
  if (f.nvars() != g.nvars()) throw std::invalid_argument("divides: nvars mismatch");
  const auto& [fe, fc] = f.leading_term();
  MultiPoly q(f.nvars());
  MultiPoly r = g;
  while (!r.is_zero()) {
    const auto& [re, rc] = r.leading_term();
    ExpVec t(static_cast<std::size_t>(f.nvars()));
    for (int i = 0; i < f.nvars(); ++i) {
      if (re[i] < fe[i]) return std::nullopt;
      t[static_cast<std::size_t>(i)] = re[i] - fe[i];
    }
    MultiPoly term = MultiPoly::monomial(f.nvars(), t, rc / fc);
    q += term;
    r -= term * f;
  }
  return q;
}

MultiPoly poly_det(std::vector<std::vector<MultiPoly>> m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) throw std::invalid_argument("poly_det: empty matrix");
  const int nvars = m[0][0].nvars();
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("poly_det: not square");

  int sign = 1;
  MultiPoly prev = MultiPoly::constant(nvars, GaussianRational(1));
  for (int k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i)
        if (!m[i][k].is_zero()) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return MultiPoly::zero(nvars);
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        MultiPoly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        if (num.is_zero()) {
          m[i][j] = MultiPoly::zero(nvars);
          continue;
        }
        if (prev.is_constant()) {
          m[i][j] = inverse(prev.constant_value()) * num;
        } else {
          auto q = divides(prev, num);
          if (!q) throw std::logic_error("poly_det: non-exact Bareiss division");
          m[i][j] = std::move(*q);
        }
      }
      m[i][k] = MultiPoly::zero(nvars);
    }
    prev = m[k][k];
  }
  MultiPoly det = m[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

namespace {

int trimmed_degree(const std::vector<MultiPoly>& coeffs) {
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k)
    if (!coeffs[static_cast<std::size_t>(k)].is_zero()) return k;
  return -1;
}

}  // namespace

MultiPoly sylvester_resultant(std::vector<MultiPoly> a, std::vector<MultiPoly> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("sylvester_resultant: empty input");
  const int nvars = a[0].nvars();
  const int da = trimmed_degree(a);
  const int db = trimmed_degree(b);
  if (da < 1 || db < 1)
    throw std::invalid_argument("sylvester_resultant: inputs must have positive degree in t");

  const int size = da + db;
  std::vector<std::vector<MultiPoly>> s(static_cast<std::size_t>(size),
                                        std::vector<MultiPoly>(static_cast<std::size_t>(size), MultiPoly::zero(nvars)));
  // Rows of a-coefficients (highest degree first), then rows of b.
  for (int row = 0; row < db; ++row)
    for (int k = 0; k <= da; ++k)
      s[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + k)] = a[static_cast<std::size_t>(da - k)];
  for (int row = 0; row < da; ++row)
    for (int k = 0; k <= db; ++k)
      s[static_cast<std::size_t>(db + row)][static_cast<std::size_t>(row + k)] = b[static_cast<std::size_t>(db - k)];
  return poly_det(std::move(s));
}

std::vector<MultiPoly> coefficients_in_var(const MultiPoly& f, int var) {
  int top = 0;
  for (const auto& [e, c] : f.terms()) top = std::max(top, e[var]);
  std::vector<MultiPoly> out(static_cast<std::size_t>(top + 1), MultiPoly::zero(f.nvars()));
  for (const auto& [e, c] : f.terms()) {
    ExpVec d = e;
    int k = d[var];
    d[var] = 0;
    out[static_cast<std::size_t>(k)].add_term(d, c);
  }
  return out;
}

namespace {

void enumerate_exponents(int nvars, int degree, bool exact_degree, ExpVec& cur, int pos,
                         const std::function<void(const ExpVec&)>& emit) {
  if (pos == nvars - 1) {
    cur[static_cast<std::size_t>(pos)] = degree;
    emit(cur);
    if (!exact_degree)
      for (int d = degree - 1; d >= 0; --d) {
        cur[static_cast<std::size_t>(pos)] = d;
        emit(cur);
      }
    return;
  }
  for (int d = degree; d >= 0; --d) {
    cur[static_cast<std::size_t>(pos)] = d;
    enumerate_exponents(nvars, degree - d, exact_degree, cur, pos + 1, emit);
  }
}

}  // namespace

MultiPoly random_poly(Rng& rng, int nvars, int degree, bool homogeneous) {
  MultiPoly out(nvars);
  ExpVec cur(static_cast<std::size_t>(nvars));
  enumerate_exponents(nvars, degree, homogeneous, cur, 0, [&](const ExpVec& e) {
    out.add_term(e, GaussianRational(rng.nonzero_int(9)));
  });
  return out;
}

std::complex<double> CompiledPoly::eval(std::span<const std::complex<double>> point) const {
  std::complex<double> acc = 0.0;
  for (const auto& [c, e] : terms) {
    std::complex<double> t = c;
    for (int i = 0; i < nvars; ++i)
      for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) t *= point[static_cast<std::size_t>(i)];
    acc += t;
  }
  return acc;
}

CompiledPoly compile(const MultiPoly& f) {
  CompiledPoly out;
  out.nvars = f.nvars();
  out.terms.reserve(f.term_count());
  for (const auto& [e, c] : f.terms()) out.terms.emplace_back(c.approx(), e);
  return out;
}

}  // namespace logfol
