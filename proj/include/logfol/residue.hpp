#pragma once

#include "logfol/tensor.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace logfol {

/// Embedded p-torus around the stratum X_I = {f_{i_1} = ... = f_{i_p} = 0},
/// homologous to the coordinate torus of the local normal form. z(t) =
/// base + sum_k radius e^{i t_k} dirs[k].
struct TorusCycle {
  Eigen::VectorXcd base;
  std::vector<Eigen::VectorXcd> dirs;
  double radius = 0.0;

  int p() const { return static_cast<int>(dirs.size()); }
};

struct ResidueTolerances {
  double newton_tol = 1e-12;
  int newton_max_iter = 50;
  int newton_max_starts = 100;
  double foreign_pole_min = 1e-3;  // reject base points too close to other poles
  double winding_tol = 1e-6;
  double convergence_tol = 1e-6;  // |N=64 - N=32| guard
};

/// Newton search for a point of X_I away from the other pole divisors; the
/// square system joins the p pole equations with random affine equations.
Eigen::VectorXcd find_base_point(const PoleSystem& poles, const IndexTuple& index, std::uint64_t seed,
                                 const ResidueTolerances& tols = {});

/// Builds a validated cycle at the base point: directions from a right
/// inverse of the pole Jacobian, epsilon halved from 0.1 until the torus
/// stays clear of every divisor, winding matrix checked against the
/// identity.
TorusCycle build_cycle(const PoleSystem& poles, const IndexTuple& index, const Eigen::VectorXcd& base,
                       const ResidueTolerances& tols = {});

/// (1/(2 pi i)^p) times the integral of expand(spec)/prod(f) over the cycle,
/// by tensor-product trapezoidal quadrature with nodes_per_circle nodes.
std::complex<double> torus_residue(const LogFoliationSpec& spec, const IndexTuple& index,
                                   const TorusCycle& cycle, int nodes_per_circle);

struct ResidueRow {
  IndexTuple index;
  GaussianRational exact;
  std::complex<double> recovered;
  double error = 0.0;
  double error_n32 = 0.0;
  double epsilon = 0.0;
  int nodes = 0;
  std::uint64_t seed = 0;
};

/// Recovers every tensor entry of the spec by quadrature and reports the
/// comparison against the exact values. Independent index jobs run
/// concurrently on per-job PRNG streams.
std::vector<ResidueRow> recover_residues(const LogFoliationSpec& spec, std::uint64_t seed,
                                         const ResidueTolerances& tols = {});

}  // namespace logfol
