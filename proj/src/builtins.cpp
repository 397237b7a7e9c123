#include "logfol/builtins.hpp"

#include "logfol/prng.hpp"

#include <functional>
#include <stdexcept>

namespace logfol {

namespace {

ExactMatrix coefficient_rows(const std::vector<MultiPoly>& linear_forms, int nvars) {
  ExactMatrix m = ExactMatrix::Constant(static_cast<int>(linear_forms.size()), nvars, GaussianRational(0));
  for (std::size_t row = 0; row < linear_forms.size(); ++row)
    for (const auto& [e, c] : linear_forms[row].terms())
      for (int k = 0; k < nvars; ++k)
        if (e[k] == 1) m(static_cast<int>(row), k) = c;
  return m;
}

bool in_general_position(const std::vector<MultiPoly>& forms, int nvars) {
  const int r = static_cast<int>(forms.size());
  ExactMatrix all = coefficient_rows(forms, nvars);
  // Every subset of size <= nvars must have full rank; by matroid exchange it
  // is enough to check sizes min(r, nvars-1) and min(r, nvars).
  std::vector<int> subset;
  std::function<bool(int, int, int)> check = [&](int start, int remaining, int size) -> bool {
    if (remaining == 0) {
      ExactMatrix sub(size, nvars);
      for (int i = 0; i < size; ++i) sub.row(i) = all.row(subset[static_cast<std::size_t>(i)]);
      return rank(sub) == size;
    }
    for (int i = start; i <= r - remaining; ++i) {
      subset.push_back(i);
      bool ok = check(i + 1, remaining - 1, size);
      subset.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  for (int size : {std::min(r, nvars - 1), std::min(r, nvars)}) {
    subset.clear();
    if (!check(0, size, size)) return false;
  }
  return true;
}

MultiPoly random_linear(Rng& rng, int nvars) {
  MultiPoly f(nvars);
  for (int k = 0; k < nvars; ++k) {
    ExpVec e(static_cast<std::size_t>(nvars), 0);
    e[static_cast<std::size_t>(k)] = 1;
    f.add_term(e, GaussianRational(rng.int_in(-9, 9)));
  }
  return f;
}

ResidueTensor sample_radial_tensor(Rng& rng, const std::vector<int>& degrees, int r, int p,
                                   bool require_dense) {
  std::vector<ResidueTensor> basis = radial_kernel(degrees, r, p);
  if (basis.empty()) throw std::runtime_error("sample_radial_tensor: empty radial kernel");
  for (int attempt = 0; attempt < 100; ++attempt) {
    ResidueTensor t(r, p);
    for (const auto& b : basis) t += GaussianRational(rng.nonzero_int(9)) * b;
    if (t.is_zero()) continue;
    if (require_dense) {
      std::size_t full = 1;
      for (int k = 0; k < p; ++k) full = full * static_cast<std::size_t>(r - k) / static_cast<std::size_t>(k + 1);
      if (t.entries().size() != full) continue;
    }
    return t;
  }
  throw std::runtime_error("sample_radial_tensor: no admissible sample");
}

}  // namespace

PoleSystem seeded_linear_poles(int n, int r, std::uint64_t seed) {
  const int nv = n + 1;
  for (int attempt = 0; attempt < 200; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<MultiPoly> forms;
    bool degenerate = false;
    for (int j = 0; j < r; ++j) {
      MultiPoly f = random_linear(rng, nv);
      if (f.is_zero()) {
        degenerate = true;
        break;
      }
      forms.push_back(std::move(f));
    }
    if (degenerate || !in_general_position(forms, nv)) continue;
    return make_pole_system(n, std::move(forms));
  }
  throw std::runtime_error("seeded_linear_poles: no general-position sample found");
}

LogFoliationSpec p3_planes_spec(std::uint64_t seed) {
  PoleSystem poles = seeded_linear_poles(3, 6, seed);
  Rng rng(derive_seed(seed, 0xA11CE));
  ResidueTensor tensor = sample_radial_tensor(rng, poles.degrees, 6, 2, /*require_dense=*/true);
  return LogFoliationSpec(std::move(poles), std::move(tensor));
}

LogFoliationSpec rational_fibration_spec(std::uint64_t seed) {
  const int nv = 4;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<MultiPoly> polys;
    polys.push_back(random_linear(rng, nv));
    polys.push_back(random_poly(rng, nv, 2, true));
    polys.push_back(random_poly(rng, nv, 3, true));
    if (polys[0].is_zero()) continue;
    PoleSystem poles = make_pole_system(3, std::move(polys));
    std::vector<ResidueTensor> basis = radial_kernel(poles.degrees, 3, 2);
    if (basis.size() != 1) continue;
    if (basis[0].entries().size() != 3) continue;  // want all three residues nonzero
    return LogFoliationSpec(std::move(poles), basis[0]);
  }
  throw std::runtime_error("rational_fibration_spec: no admissible sample");
}

LogFoliationSpec perturbation_spec(int n, const std::vector<std::vector<Rational>>& tau,
                                   std::uint64_t seed) {
  PoleSystem poles = seeded_linear_poles(n, n, seed);
  std::vector<Covector> family = perturbation_family(poles.degrees, n, tau);
  ResidueTensor tensor = wedge_covectors(family);
  if (tensor.is_zero()) throw std::runtime_error("perturbation_spec: degenerate family wedge");
  return LogFoliationSpec(std::move(poles), std::move(tensor));
}

LogFoliationSpec seeded_projective_spec(int n, int p, const std::vector<int>& degrees,
                                        std::uint64_t seed) {
  const int nv = n + 1;
  const int r = static_cast<int>(degrees.size());
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<MultiPoly> polys;
    for (int d : degrees) polys.push_back(random_poly(rng, nv, d, true));
    PoleSystem poles;
    try {
      poles = make_pole_system(n, std::move(polys));
    } catch (const std::invalid_argument&) {
      continue;
    }
    ResidueTensor tensor = sample_radial_tensor(rng, poles.degrees, r, p, /*require_dense=*/false);
    return LogFoliationSpec(std::move(poles), std::move(tensor));
  }
  throw std::runtime_error("seeded_projective_spec: no admissible sample");
}

}  // namespace logfol
