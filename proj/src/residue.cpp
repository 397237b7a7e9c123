#include "logfol/residue.hpp"

#include "logfol/parallel.hpp"
#include "logfol/prng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace logfol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PoleEvaluator {
  std::vector<CompiledPoly> polys;
  std::vector<std::vector<CompiledPoly>> gradients;

  explicit PoleEvaluator(const PoleSystem& poles) {
    for (const auto& f : poles.polys) {
      polys.push_back(compile(f));
      std::vector<CompiledPoly> grad;
      for (int v = 0; v < poles.nvars(); ++v) grad.push_back(compile(f.derivative(v)));
      gradients.push_back(std::move(grad));
    }
  }
};

std::vector<std::complex<double>> to_vec(const Eigen::VectorXcd& z) {
  return {z.data(), z.data() + z.size()};
}

}  // namespace

Eigen::VectorXcd find_base_point(const PoleSystem& poles, const IndexTuple& index, std::uint64_t seed,
                                 const ResidueTolerances& tols) {
  const int nv = poles.nvars();
  const int p = static_cast<int>(index.size());
  if (p > poles.n) throw std::invalid_argument("find_base_point: p exceeds projective dimension");
  for (int i : index)
    if (i < 0 || i >= poles.r()) throw std::invalid_argument("find_base_point: pole index out of range");

  PoleEvaluator ev(poles);

  for (int start = 0; start < tols.newton_max_starts; ++start) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(start)));

    // Square system: the p pole equations plus nv - p random affine rows
    // a . z = 1.
    Eigen::MatrixXcd affine(nv - p, nv);
    for (int row = 0; row < nv - p; ++row)
      for (int col = 0; col < nv; ++col) affine(row, col) = rng.complex_in_box();

    Eigen::VectorXcd z(nv);
    for (int i = 0; i < nv; ++i) z(i) = rng.complex_in_box();

    bool converged = false;
    for (int iter = 0; iter < tols.newton_max_iter; ++iter) {
      Eigen::VectorXcd f(nv);
      Eigen::MatrixXcd jac(nv, nv);
      std::vector<std::complex<double>> zv = to_vec(z);
      for (int row = 0; row < p; ++row) {
        int pole = index[static_cast<std::size_t>(row)];
        f(row) = ev.polys[static_cast<std::size_t>(pole)].eval(zv);
        for (int col = 0; col < nv; ++col)
          jac(row, col) = ev.gradients[static_cast<std::size_t>(pole)][static_cast<std::size_t>(col)].eval(zv);
      }
      for (int row = 0; row < nv - p; ++row) {
        f(p + row) = (affine.row(row) * z)(0) - 1.0;
        for (int col = 0; col < nv; ++col) jac(p + row, col) = affine(row, col);
      }
      if (f.lpNorm<Eigen::Infinity>() < tols.newton_tol) {
        converged = true;
        break;
      }
      Eigen::VectorXcd step = jac.partialPivLu().solve(f);
      if (!step.allFinite()) break;
      z -= step;
      if (!(z.lpNorm<Eigen::Infinity>() < 1e8)) break;
    }
    if (!converged) continue;

    // Keep well away from the divisors not in I (scale-normalized point).
    Eigen::VectorXcd zn = z / z.lpNorm<Eigen::Infinity>();
    std::vector<std::complex<double>> znv = to_vec(zn);
    bool clear = true;
    for (int k = 0; k < poles.r(); ++k) {
      if (std::find(index.begin(), index.end(), k) != index.end()) continue;
      if (std::abs(ev.polys[static_cast<std::size_t>(k)].eval(znv)) < tols.foreign_pole_min) {
        clear = false;
        break;
      }
    }
    if (clear) return z;
  }
  throw std::runtime_error("find_base_point: no admissible point found (degenerate spec or bad seed)");
}

TorusCycle build_cycle(const PoleSystem& poles, const IndexTuple& index, const Eigen::VectorXcd& base,
                       const ResidueTolerances& tols) {
  const int nv = poles.nvars();
  const int p = static_cast<int>(index.size());
  PoleEvaluator ev(poles);

  // Right inverse of the p x nv Jacobian at the base point.
  Eigen::MatrixXcd jac(p, nv);
  std::vector<std::complex<double>> bv = to_vec(base);
  for (int row = 0; row < p; ++row) {
    int pole = index[static_cast<std::size_t>(row)];
    for (int col = 0; col < nv; ++col)
      jac(row, col) = ev.gradients[static_cast<std::size_t>(pole)][static_cast<std::size_t>(col)].eval(bv);
  }
  Eigen::MatrixXcd gram = jac * jac.adjoint();
  Eigen::MatrixXcd right_inverse = jac.adjoint() * gram.partialPivLu().solve(Eigen::MatrixXcd::Identity(p, p));

  TorusCycle cycle;
  cycle.base = base;
  for (int k = 0; k < p; ++k) cycle.dirs.push_back(right_inverse.col(k));

  const int sample = 64;
  double eps = 0.1;
  for (int halving = 0; halving <= 20; ++halving, eps *= 0.5) {
    cycle.radius = eps;

    // Invariant check on the sampled grid (all circles sampled jointly on
    // the diagonal plus each axis; a full grid for p <= 2).
    bool ok = true;
    auto at = [&](const std::vector<double>& t) {
      Eigen::VectorXcd z = cycle.base;
      for (int k = 0; k < p; ++k)
        z += eps * std::exp(std::complex<double>(0.0, t[static_cast<std::size_t>(k)])) * cycle.dirs[static_cast<std::size_t>(k)];
      return z;
    };
    std::vector<double> t(static_cast<std::size_t>(p), 0.0);
    std::function<void(int)> walk = [&](int dim) {
      if (!ok) return;
      if (dim == p) {
        std::vector<std::complex<double>> zv = to_vec(at(t));
        for (int k = 0; k < poles.r(); ++k) {
          double mag = std::abs(ev.polys[static_cast<std::size_t>(k)].eval(zv));
          bool in_index = std::find(index.begin(), index.end(), k) != index.end();
          if (in_index ? (mag <= 0.0) : (mag <= 0.1 * eps)) {
            ok = false;
            return;
          }
        }
        return;
      }
      for (int node = 0; node < sample && ok; ++node) {
        t[static_cast<std::size_t>(dim)] = kTwoPi * node / sample;
        walk(dim + 1);
      }
    };
    walk(0);

    if (ok) {
      // Winding validation: (1/2 pi i) of the logarithmic derivative of
      // f_{i_j} along the k-th generating loop of the torus (other angles
      // held at zero) must be the Kronecker delta.
      bool winding_ok = true;
      Eigen::VectorXcd loop_base = cycle.base;
      for (int l = 0; l < p; ++l) loop_base += eps * cycle.dirs[static_cast<std::size_t>(l)];
      for (int k = 0; k < p && winding_ok; ++k) {
        for (int rowj = 0; rowj < p && winding_ok; ++rowj) {
          int pole = index[static_cast<std::size_t>(rowj)];
          std::complex<double> acc = 0.0;
          for (int node = 0; node < sample; ++node) {
            double tk = kTwoPi * node / sample;
            Eigen::VectorXcd z = loop_base +
                                 (std::exp(std::complex<double>(0.0, tk)) - 1.0) * eps *
                                     cycle.dirs[static_cast<std::size_t>(k)];
            Eigen::VectorXcd dz = eps * std::complex<double>(0.0, 1.0) * std::exp(std::complex<double>(0.0, tk)) *
                                  cycle.dirs[static_cast<std::size_t>(k)];
            std::vector<std::complex<double>> zv = to_vec(z);
            std::complex<double> fval = ev.polys[static_cast<std::size_t>(pole)].eval(zv);
            std::complex<double> df = 0.0;
            for (int col = 0; col < nv; ++col)
              df += ev.gradients[static_cast<std::size_t>(pole)][static_cast<std::size_t>(col)].eval(zv) * dz(col);
            acc += df / fval;
          }
          std::complex<double> winding = acc / static_cast<double>(sample) / std::complex<double>(0.0, 1.0);
          double expected = (rowj == k) ? 1.0 : 0.0;
          if (std::abs(winding - expected) > tols.winding_tol) winding_ok = false;
        }
      }
      if (winding_ok) return cycle;
      throw std::runtime_error("build_cycle: winding validation failed (cycle class is wrong)");
    }
  }
  throw std::runtime_error("build_cycle: no admissible radius after 20 halvings");
}

std::complex<double> torus_residue(const LogFoliationSpec& spec, const IndexTuple& index,
                                   const TorusCycle& cycle, int nodes_per_circle) {
  const int p = spec.p();
  if (cycle.p() != p) throw std::invalid_argument("torus_residue: cycle arity mismatch");
  if (p > 3) throw std::invalid_argument("torus_residue: p > 3 not supported (cost bound)");

  CompiledForm w = compile(expand(spec));
  CompiledPoly denom = compile(spec.poles.product());
  const int big_n = nodes_per_circle;

  // Tensor-product trapezoid over [0, 2 pi)^p: mean of the pulled-back
  // integrand times (2 pi)^p, then the (2 pi i)^p normalization; the two
  // (2 pi)^p factors cancel into i^{-p} times the plain mean.
  std::vector<int> node(static_cast<std::size_t>(p), 0);
  std::complex<double> sum = 0.0;
  std::vector<Eigen::VectorXcd> tangents(static_cast<std::size_t>(p));
  while (true) {
    Eigen::VectorXcd z = cycle.base;
    for (int k = 0; k < p; ++k) {
      double tk = kTwoPi * node[static_cast<std::size_t>(k)] / big_n;
      std::complex<double> phase = std::exp(std::complex<double>(0.0, tk));
      z += cycle.radius * phase * cycle.dirs[static_cast<std::size_t>(k)];
      tangents[static_cast<std::size_t>(k)] =
          cycle.radius * std::complex<double>(0.0, 1.0) * phase * cycle.dirs[static_cast<std::size_t>(k)];
    }
    EvaluatedForm wz = w.eval(z);
    std::vector<std::complex<double>> zv = to_vec(z);
    sum += wz.apply(tangents) / denom.eval(zv);

    int dim = p - 1;
    while (dim >= 0 && ++node[static_cast<std::size_t>(dim)] == big_n) {
      node[static_cast<std::size_t>(dim)] = 0;
      --dim;
    }
    if (dim < 0) break;
  }

  double cells = std::pow(static_cast<double>(big_n), p);
  std::complex<double> mean = sum / cells;
  // Divide by i^p.
  std::complex<double> ip = std::pow(std::complex<double>(0.0, 1.0), p);
  return mean / ip;
}

std::vector<ResidueRow> recover_residues(const LogFoliationSpec& spec, std::uint64_t seed,
                                         const ResidueTolerances& tols) {
  std::vector<IndexTuple> indices;
  for (const auto& [idx, c] : spec.tensor.entries()) indices.push_back(idx);
  std::vector<ResidueRow> rows(indices.size());
  std::vector<std::exception_ptr> errors(indices.size());

  parallel_for(indices.size(), [&](std::size_t job) {
    try {
      const IndexTuple& idx = indices[job];
      std::uint64_t job_seed = derive_seed(seed, job);
      Eigen::VectorXcd base = find_base_point(spec.poles, idx, job_seed, tols);
      TorusCycle cycle = build_cycle(spec.poles, idx, base, tols);
      std::complex<double> r64 = torus_residue(spec, idx, cycle, 64);
      std::complex<double> r32 = torus_residue(spec, idx, cycle, 32);
      if (std::abs(r64 - r32) > tols.convergence_tol)
        throw std::runtime_error("recover_residues: quadrature did not converge");

      ResidueRow row;
      row.index = idx;
      row.exact = spec.tensor.entry(idx);
      row.recovered = r64;
      row.error = std::abs(r64 - row.exact.approx());
      row.error_n32 = std::abs(r32 - row.exact.approx());
      row.epsilon = cycle.radius;
      row.nodes = 64;
      row.seed = job_seed;
      rows[job] = std::move(row);
    } catch (...) {
      errors[job] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

}  // namespace logfol
