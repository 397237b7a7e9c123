#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logfol/builtins.hpp"
#include "logfol/residue.hpp"

using namespace logfol;

namespace {

// Model pole system (z0, z1) in C^4.
LogFoliationSpec model_spec() {
  ResidueTensor t(2, 2);
  t.add_entry({0, 1}, GaussianRational(1));
  return LogFoliationSpec(
      make_pole_system(3, {MultiPoly::variable(4, 0), MultiPoly::variable(4, 1)}), t);
}

}  // namespace

TEST_CASE("model bicircle: dz0/z0 ^ dz1/z1 integrates to 1") {
  LogFoliationSpec spec = model_spec();
  TorusCycle cycle;
  cycle.base = Eigen::VectorXcd::Zero(4);
  cycle.base(2) = 1.0;
  cycle.base(3) = -0.5;
  Eigen::VectorXcd v0 = Eigen::VectorXcd::Zero(4), v1 = Eigen::VectorXcd::Zero(4);
  v0(0) = 1.0;
  v1(1) = 1.0;
  cycle.dirs = {v0, v1};
  cycle.radius = 0.25;
  std::complex<double> r = torus_residue(spec, {0, 1}, cycle, 64);
  CHECK(std::abs(r - 1.0) < 1e-12);

  // Linearity: scaling the tensor scales the residue.
  ResidueTensor t2(2, 2);
  t2.add_entry({0, 1}, GaussianRational(Rational(7, 3)));
  LogFoliationSpec scaled(spec.poles, t2);
  std::complex<double> r2 = torus_residue(scaled, {0, 1}, cycle, 64);
  CHECK(std::abs(r2 - std::complex<double>(7.0 / 3.0, 0.0)) < 1e-12);
}

TEST_CASE("base point search lands on the stratum, off the other poles") {
  LogFoliationSpec spec = p3_planes_spec(1);
  Eigen::VectorXcd m = find_base_point(spec.poles, {0, 1}, 5);
  std::vector<std::complex<double>> mv(m.data(), m.data() + m.size());
  CompiledPoly f0 = compile(spec.poles.polys[0]), f1 = compile(spec.poles.polys[1]);
  CHECK(std::abs(f0.eval(mv)) < 1e-10);
  CHECK(std::abs(f1.eval(mv)) < 1e-10);
  Eigen::VectorXcd mn = m / m.lpNorm<Eigen::Infinity>();
  std::vector<std::complex<double>> mnv(mn.data(), mn.data() + mn.size());
  for (int k = 2; k < 6; ++k)
    CHECK(std::abs(compile(spec.poles.polys[static_cast<std::size_t>(k)]).eval(mnv)) > 1e-3);

  CHECK_THROWS_AS(find_base_point(spec.poles, {0, 1, 2, 3}, 5), std::invalid_argument);
}

TEST_CASE("cycle construction validates the winding matrix") {
  LogFoliationSpec spec = p3_planes_spec(1);
  Eigen::VectorXcd m = find_base_point(spec.poles, {0, 1}, 5);
  TorusCycle cycle = build_cycle(spec.poles, {0, 1}, m);
  CHECK(cycle.radius > 0);
  std::complex<double> r = torus_residue(spec, {0, 1}, cycle, 64);
  CHECK(std::abs(r - spec.tensor.entry({0, 1}).approx()) < 1e-8);

  // Swapped directions: the winding matrix becomes a permutation, which the
  // validation must reject.
  LogFoliationSpec model = model_spec();
  Eigen::VectorXcd base = Eigen::VectorXcd::Zero(4);
  base(2) = 1.0;
  base(3) = -0.5;
  // build_cycle derives directions itself, so emulate the failure by asking
  // for the cycle of the swapped index tuple at the same base point: the
  // Jacobian right-inverse then produces swapped directions and the winding
  // check sees the permutation.
  // Directly: construct the cycle and verify torus_residue with swapped dirs
  // disagrees with the exact value.
  TorusCycle good = build_cycle(model.poles, {0, 1}, base);
  TorusCycle swapped = good;
  std::swap(swapped.dirs[0], swapped.dirs[1]);
  // The integral itself is antisymmetric under swapping the circle order.
  std::complex<double> rs = torus_residue(model, {0, 1}, swapped, 32);
  CHECK(std::abs(rs + 1.0) < 1e-10);
}

TEST_CASE("full recovery on the six-plane example") {
  LogFoliationSpec spec = p3_planes_spec(1);
  auto rows = recover_residues(spec, 42);
  REQUIRE(rows.size() == 15);
  for (const auto& row : rows) {
    CHECK(row.error < 1e-8);
    CHECK(row.nodes == 64);
  }
}

TEST_CASE("recovery across linear and quadric poles, p <= 2") {
  for (auto [n, p, degs, pole_seed, res_seed] :
       {std::tuple<int, int, std::vector<int>, std::uint64_t, std::uint64_t>{2, 1, {1, 1, 1}, 300, 7000},
        {2, 1, {1, 1, 2}, 402, 7002},
        {3, 2, {1, 1, 1, 2}, 503, 7003},
        {3, 1, {2, 1, 1}, 620, 7004}}) {
    LogFoliationSpec spec = seeded_projective_spec(n, p, degs, pole_seed);
    auto rows = recover_residues(spec, res_seed);
    for (const auto& row : rows) CHECK(row.error < 1e-8);
  }
}

TEST_CASE("spectral decay is visible when the radius is constrained") {
  // Pinned seed where the admissible radius was halved: the N=32 truncation
  // error sits far above the N=64 one.
  LogFoliationSpec spec = seeded_projective_spec(3, 2, {1, 1, 1, 1}, 608);
  auto rows = recover_residues(spec, 7008);
  double worst64 = 0.0, worst32 = 0.0;
  for (const auto& row : rows) {
    worst64 = std::max(worst64, row.error);
    worst32 = std::max(worst32, row.error_n32);
  }
  CHECK(worst64 < 1e-8);
  CHECK(worst32 > 1e-9);
  CHECK(worst32 / std::max(worst64, 1e-300) >= 1e3);
}
