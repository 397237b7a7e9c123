#include "logfol/forms.hpp"

#include <algorithm>
#include <stdexcept>

namespace logfol {

std::optional<std::pair<int, IndexTuple>> merge_tuples(const IndexTuple& a, const IndexTuple& b) {
  IndexTuple out;
  out.reserve(a.size() + b.size());
  int sign = 1;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return std::nullopt;
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else {
      // b[j] moves past the a.size()-i remaining entries of a.
      if ((a.size() - i) % 2 != 0) sign = -sign;
      out.push_back(b[j++]);
    }
  }
  while (i < a.size()) out.push_back(a[i++]);
  while (j < b.size()) out.push_back(b[j++]);
  return std::make_pair(sign, std::move(out));
}

PolyForm::PolyForm(int nvars, int degree) : nvars_(nvars), degree_(degree) {
  if (degree < 0 || degree > nvars) throw std::invalid_argument("PolyForm: degree out of range");
}

PolyForm PolyForm::from_poly(const MultiPoly& f) {
  PolyForm w(f.nvars(), 0);
  w.add_term({}, f);
  return w;
}

PolyForm PolyForm::basis_one_form(int nvars, int j) {
  PolyForm w(nvars, 1);
  w.add_term({j}, MultiPoly::constant(nvars, GaussianRational(1)));
  return w;
}

const MultiPoly* PolyForm::coefficient(const IndexTuple& idx) const {
  auto it = coeffs_.find(idx);
  return it == coeffs_.end() ? nullptr : &it->second;
}

void PolyForm::add_term(const IndexTuple& idx, const MultiPoly& c) {
  if (c.is_zero()) return;
  if (static_cast<int>(idx.size()) != degree_)
    throw std::invalid_argument("PolyForm::add_term: tuple length mismatch");
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= nvars_) throw std::invalid_argument("PolyForm::add_term: index out of range");
    if (k > 0 && idx[k] <= idx[k - 1])
      throw std::invalid_argument("PolyForm::add_term: tuple not strictly increasing");
  }
  if (c.nvars() != nvars_) throw std::invalid_argument("PolyForm::add_term: coefficient nvars mismatch");
  auto [it, inserted] = coeffs_.emplace(idx, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

PolyForm PolyForm::operator-() const {
  PolyForm out(nvars_, degree_);
  for (const auto& [idx, c] : coeffs_) out.coeffs_.emplace(idx, -c);
  return out;
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
  if (nvars_ != o.nvars_ || degree_ != o.degree_)
    throw std::invalid_argument("PolyForm: shape mismatch in addition");
  for (const auto& [idx, c] : o.coeffs_) add_term(idx, c);
  return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
  if (nvars_ != o.nvars_ || degree_ != o.degree_)
    throw std::invalid_argument("PolyForm: shape mismatch in subtraction");
  for (const auto& [idx, c] : o.coeffs_) add_term(idx, -c);
  return *this;
}

PolyForm operator*(const MultiPoly& f, const PolyForm& w) {
  PolyForm out(w.nvars_, w.degree_);
  for (const auto& [idx, c] : w.coeffs_) out.add_term(idx, f * c);
  return out;
}

PolyForm operator*(const GaussianRational& c, const PolyForm& w) {
  PolyForm out(w.nvars_, w.degree_);
  for (const auto& [idx, x] : w.coeffs_) out.add_term(idx, c * x);
  return out;
}

bool PolyVectorField::is_zero() const {
  for (const auto& c : components)
    if (!c.is_zero()) return false;
  return true;
}

PolyVectorField radial_field(int nvars) {
  PolyVectorField x;
  x.components.reserve(static_cast<std::size_t>(nvars));
  for (int j = 0; j < nvars; ++j) x.components.push_back(MultiPoly::variable(nvars, j));
  return x;
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("wedge: nvars mismatch");
  int degree = a.form_degree() + b.form_degree();
  if (degree > a.nvars()) return PolyForm::zero(a.nvars(), a.nvars());
  PolyForm out(a.nvars(), degree);
  for (const auto& [ia, ca] : a.coefficients()) {
    for (const auto& [ib, cb] : b.coefficients()) {
      auto merged = merge_tuples(ia, ib);
      if (!merged) continue;
      MultiPoly c = ca * cb;
      out.add_term(merged->second, merged->first < 0 ? -c : c);
    }
  }
  return out;
}

PolyForm exterior_derivative(const PolyForm& a) {
  if (a.form_degree() >= a.nvars())
    throw std::invalid_argument("exterior_derivative: top-degree form");
  PolyForm out(a.nvars(), a.form_degree() + 1);
  for (const auto& [idx, c] : a.coefficients()) {
    for (int j = 0; j < a.nvars(); ++j) {
      MultiPoly dj = c.derivative(j);
      if (dj.is_zero()) continue;
      auto merged = merge_tuples({j}, idx);
      if (!merged) continue;
      out.add_term(merged->second, merged->first < 0 ? -dj : dj);
    }
  }
  return out;
}

PolyForm contract(const PolyForm& a, const PolyVectorField& x) {
  if (a.form_degree() < 1) throw std::invalid_argument("contract: degree-0 form");
  if (x.nvars() != a.nvars()) throw std::invalid_argument("contract: nvars mismatch");
  PolyForm out(a.nvars(), a.form_degree() - 1);
  for (const auto& [idx, c] : a.coefficients()) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const MultiPoly& comp = x.components[static_cast<std::size_t>(idx[k])];
      if (comp.is_zero()) continue;
      IndexTuple rest;
      rest.reserve(idx.size() - 1);
      for (std::size_t l = 0; l < idx.size(); ++l)
        if (l != k) rest.push_back(idx[l]);
      MultiPoly t = comp * c;
      out.add_term(rest, (k % 2 != 0) ? -t : t);
    }
  }
  return out;
}

PolyForm pullback_linear(const PolyForm& a, const ExactMatrix& m) {
  if (static_cast<int>(m.rows()) != a.nvars())
    throw std::invalid_argument("pullback_linear: matrix rows must match form nvars");
  const int new_nvars = static_cast<int>(m.cols());
  if (new_nvars > static_cast<int>(m.rows()) || rank(m) != new_nvars)
    throw std::invalid_argument("pullback_linear: matrix must have full column rank");
  if (a.form_degree() > new_nvars) return PolyForm::zero(new_nvars, new_nvars);

  // Pullbacks of the coordinate one-forms: dz_i -> sum_j M(i,j) ds_j.
  std::vector<PolyForm> dz;
  dz.reserve(static_cast<std::size_t>(m.rows()));
  for (int i = 0; i < static_cast<int>(m.rows()); ++i) {
    PolyForm w(new_nvars, 1);
    for (int j = 0; j < new_nvars; ++j)
      w.add_term({j}, MultiPoly::constant(new_nvars, m(i, j)));
    dz.push_back(std::move(w));
  }

  PolyForm out(new_nvars, a.form_degree());
  for (const auto& [idx, c] : a.coefficients()) {
    PolyForm w = PolyForm::from_poly(MultiPoly::constant(new_nvars, GaussianRational(1)));
    for (int i : idx) w = wedge(w, dz[static_cast<std::size_t>(i)]);
    out += c.substitute_linear(m) * w;
  }
  return out;
}

PolyForm affine_chart(const PolyForm& a, int var) {
  if (var < 0 || var >= a.nvars()) throw std::out_of_range("affine_chart: variable index");
  PolyForm out(a.nvars() - 1, a.form_degree());
  for (const auto& [idx, c] : a.coefficients()) {
    if (std::find(idx.begin(), idx.end(), var) != idx.end()) continue;
    IndexTuple shifted;
    shifted.reserve(idx.size());
    for (int i : idx) shifted.push_back(i > var ? i - 1 : i);
    out.add_term(shifted, c.dehomogenize(var).drop_var(var));
  }
  return out;
}

PolyVectorField rotational(const PolyForm& w) {
  const int n = w.nvars();
  if (w.form_degree() != n - 2)
    throw std::invalid_argument("rotational: form degree must be nvars - 2");
  PolyForm dw = exterior_derivative(w);
  PolyVectorField x;
  x.components.assign(static_cast<std::size_t>(n), MultiPoly::zero(n));
  for (int k = 0; k < n; ++k) {
    IndexTuple omit_k;
    omit_k.reserve(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i)
      if (i != k) omit_k.push_back(i);
    const MultiPoly* c = dw.coefficient(omit_k);
    if (!c) continue;
    x.components[static_cast<std::size_t>(k)] = (k % 2 != 0) ? -*c : *c;
  }
  return x;
}

double EvaluatedForm::max_abs() const {
  double m = 0.0;
  for (const auto& [idx, v] : coeffs) m = std::max(m, std::abs(v));
  return m;
}

std::complex<double> EvaluatedForm::apply(const std::vector<Eigen::VectorXcd>& vectors) const {
  if (static_cast<int>(vectors.size()) != degree)
    throw std::invalid_argument("EvaluatedForm::apply: wrong number of vectors");
  std::complex<double> acc = 0.0;
  const int p = degree;
  std::vector<int> perm(static_cast<std::size_t>(p));
  for (const auto& [idx, c] : coeffs) {
    // det of the p x p matrix (vectors[m][idx[l]]) via permutation expansion;
    // p <= 3 in practice.
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = static_cast<int>(k);
    std::complex<double> det = 0.0;
    do {
      int sign = 1;
      for (std::size_t i2 = 0; i2 < perm.size(); ++i2)
        for (std::size_t j2 = i2 + 1; j2 < perm.size(); ++j2)
          if (perm[i2] > perm[j2]) sign = -sign;
      std::complex<double> prod = 1.0;
      for (int l = 0; l < p; ++l)
        prod *= vectors[static_cast<std::size_t>(perm[static_cast<std::size_t>(l)])](idx[static_cast<std::size_t>(l)]);
      det += static_cast<double>(sign) * prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    acc += c * det;
  }
  return acc;
}

EvaluatedForm evaluate(const PolyForm& a, const Eigen::VectorXcd& point) {
  if (static_cast<int>(point.size()) != a.nvars())
    throw std::invalid_argument("evaluate: point dimension mismatch");
  EvaluatedForm out;
  out.nvars = a.nvars();
  out.degree = a.form_degree();
  std::vector<std::complex<double>> pt(point.data(), point.data() + point.size());
  for (const auto& [idx, c] : a.coefficients()) {
    std::complex<double> v = c.eval(pt);
    if (v != 0.0) out.coeffs.emplace(idx, v);
  }
  return out;
}

EvaluatedForm CompiledForm::eval(const Eigen::VectorXcd& point) const {
  EvaluatedForm out;
  out.nvars = nvars;
  out.degree = degree;
  std::vector<std::complex<double>> pt(point.data(), point.data() + point.size());
  for (const auto& [idx, c] : coeffs) {
    std::complex<double> v = c.eval(pt);
    if (v != 0.0) out.coeffs.emplace(idx, v);
  }
  return out;
}

CompiledForm compile(const PolyForm& a) {
  CompiledForm out;
  out.nvars = a.nvars();
  out.degree = a.form_degree();
  out.coeffs.reserve(a.coefficients().size());
  for (const auto& [idx, c] : a.coefficients()) out.coeffs.emplace_back(idx, compile(c));
  return out;
}

PolyForm random_form(Rng& rng, int nvars, int p, int coeff_degree) {
  PolyForm out(nvars, p);
  IndexTuple idx(static_cast<std::size_t>(p));
  // first increasing tuple
  for (int i = 0; i < p; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.add_term(idx, random_poly(rng, nvars, coeff_degree, true));
    int i = p - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == nvars - p + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < p; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace logfol
