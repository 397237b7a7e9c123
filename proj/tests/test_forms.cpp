#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logfol/forms.hpp"
#include "logfol/prng.hpp"

using namespace logfol;

namespace {

PolyForm dz(int nvars, std::initializer_list<int> idx) {
  PolyForm w(nvars, static_cast<int>(idx.size()));
  w.add_term(IndexTuple(idx), MultiPoly::constant(nvars, GaussianRational(1)));
  return w;
}

PolyForm volume_form(int nvars) {
  IndexTuple all;
  for (int i = 0; i < nvars; ++i) all.push_back(i);
  PolyForm nu(nvars, nvars);
  nu.add_term(all, MultiPoly::constant(nvars, GaussianRational(1)));
  return nu;
}

}  // namespace

TEST_CASE("wedge basics and antisymmetry") {
  int n = 4;
  CHECK(wedge(dz(n, {0, 1}), dz(n, {1})).is_zero());

  PolyForm z0dz1 = MultiPoly::variable(n, 0) * dz(n, {1});
  PolyForm w = wedge(z0dz1, dz(n, {2}));
  REQUIRE(w.coefficient({1, 2}) != nullptr);
  CHECK(*w.coefficient({1, 2}) == MultiPoly::variable(n, 0));

  Rng rng(101);
  for (int t = 0; t < 50; ++t) {
    int p = rng.int_in(0, 2), q = rng.int_in(0, 2);
    PolyForm a = random_form(rng, 4, p, 1);
    PolyForm b = random_form(rng, 4, q, 1);
    PolyForm lhs = wedge(a, b);
    PolyForm rhs = wedge(b, a);
    if ((p * q) % 2 != 0) rhs = -rhs;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("exterior derivative") {
  int n = 4;
  PolyForm z0dz1 = MultiPoly::variable(n, 0) * dz(n, {1});
  CHECK(exterior_derivative(z0dz1) == dz(n, {0, 1}));

  // d(z3 dz1 ^ dz2) = dz3 ^ dz1 ^ dz2 = dz1 ^ dz2 ^ dz3 (two transpositions).
  PolyForm w = MultiPoly::variable(n, 3) * dz(n, {1, 2});
  CHECK(exterior_derivative(w) == dz(n, {1, 2, 3}));

  Rng rng(103);
  for (int t = 0; t < 50; ++t) {
    PolyForm a = random_form(rng, 4, rng.int_in(0, 2), 2);
    CHECK(exterior_derivative(exterior_derivative(a)).is_zero());
  }
}

TEST_CASE("Leibniz rule") {
  Rng rng(107);
  for (int t = 0; t < 30; ++t) {
    int p = rng.int_in(0, 2);
    PolyForm a = random_form(rng, 4, p, 1);
    PolyForm b = random_form(rng, 4, rng.int_in(0, 1), 1);
    PolyForm lhs = exterior_derivative(wedge(a, b));
    PolyForm rhs = wedge(exterior_derivative(a), b);
    PolyForm tail = wedge(a, exterior_derivative(b));
    if (p % 2 != 0) tail = -tail;
    rhs += tail;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("contraction and the Euler identity") {
  int n = 4;
  PolyVectorField r_field = radial_field(n);
  PolyForm w = contract(dz(n, {0, 1}), r_field);
  PolyForm expected = MultiPoly::variable(n, 0) * dz(n, {1}) - MultiPoly::variable(n, 1) * dz(n, {0});
  CHECK(w == expected);

  Rng rng(109);
  for (int d = 1; d <= 4; ++d) {
    MultiPoly f = random_poly(rng, n, d, true);
    PolyForm df = exterior_derivative(PolyForm::from_poly(f));
    PolyForm lhs = contract(df, r_field);
    CHECK(lhs == PolyForm::from_poly(GaussianRational(d) * f));
  }

  for (int t = 0; t < 20; ++t) {
    PolyVectorField x;
    for (int i = 0; i < n; ++i) x.components.push_back(random_poly(rng, n, 1, false));
    PolyForm a = random_form(rng, n, 2, 1);
    CHECK(contract(contract(a, x), x).is_zero());
  }

  CHECK_THROWS_AS(contract(PolyForm::from_poly(MultiPoly::variable(n, 0)), r_field), std::invalid_argument);
}

TEST_CASE("linear pullback") {
  int n = 4;
  ExactMatrix id = ExactMatrix::Constant(n, n, GaussianRational(0));
  for (int i = 0; i < n; ++i) id(i, i) = GaussianRational(1);

  Rng rng(113);
  PolyForm a = random_form(rng, n, 2, 2);
  CHECK(pullback_linear(a, id) == a);

  // Embedding (s0, s1) -> (s0, s1, 0, 0) pulls dz0 ^ dz1 back to ds0 ^ ds1.
  ExactMatrix embed = ExactMatrix::Constant(n, 2, GaussianRational(0));
  embed(0, 0) = GaussianRational(1);
  embed(1, 1) = GaussianRational(1);
  CHECK(pullback_linear(dz(n, {0, 1}), embed) == dz(2, {0, 1}));

  for (int t = 0; t < 20; ++t) {
    ExactMatrix m(4, 3);
    do {
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = GaussianRational(rng.int_in(-4, 4));
    } while (rank(m) != 3);

    PolyForm x = random_form(rng, 4, 1, 1);
    PolyForm y = random_form(rng, 4, 1, 1);
    CHECK(pullback_linear(wedge(x, y), m) == wedge(pullback_linear(x, m), pullback_linear(y, m)));
    CHECK(pullback_linear(exterior_derivative(x), m) == exterior_derivative(pullback_linear(x, m)));

    // Functoriality: pulling back along m then k equals pulling back along m k.
    ExactMatrix k(3, 2);
    do {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) k(i, j) = GaussianRational(rng.int_in(-4, 4));
    } while (rank(k) != 2);
    ExactMatrix mk = m * k;
    if (rank(mk) == 2) CHECK(pullback_linear(pullback_linear(x, m), k) == pullback_linear(x, mk));
  }

  ExactMatrix deficient = ExactMatrix::Constant(4, 2, GaussianRational(0));
  CHECK_THROWS_AS(pullback_linear(a, deficient), std::invalid_argument);
}

TEST_CASE("numeric evaluation") {
  int n = 3;
  PolyForm w = MultiPoly::variable(n, 0) * dz(n, {1});
  Eigen::VectorXcd z(n);
  z << std::complex<double>(2, 0), std::complex<double>(0, 0), std::complex<double>(0, 0);
  EvaluatedForm e = evaluate(w, z);
  CHECK(std::abs(e.coeffs.at({1}) - 2.0) < 1e-15);

  PolyForm no_const = MultiPoly::variable(n, 2) * dz(n, {0, 1});
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(n);
  CHECK(evaluate(no_const, zero).max_abs() == 0.0);

  Rng rng(127);
  for (int t = 0; t < 10; ++t) {
    PolyForm a = random_form(rng, 3, 1, 2);
    PolyForm b = random_form(rng, 3, 1, 2);
    Eigen::VectorXcd pt(n);
    for (int i = 0; i < n; ++i) pt(i) = rng.complex_in_box();
    EvaluatedForm ea = evaluate(a, pt), eb = evaluate(b, pt), eab = evaluate(a + b, pt);
    for (const auto& [idx, v] : eab.coeffs) {
      std::complex<double> va = ea.coeffs.count(idx) ? ea.coeffs.at(idx) : 0.0;
      std::complex<double> vb = eb.coeffs.count(idx) ? eb.coeffs.at(idx) : 0.0;
      CHECK(std::abs(v - va - vb) < 1e-12);
    }
  }
}

TEST_CASE("rotational: pinned sign and round trip") {
  int n = 4;
  // w = z2 dz0 ^ dz1: dw = dz0 ^ dz1 ^ dz2, so X = -d/dz3.
  PolyForm w = MultiPoly::variable(n, 2) * dz(n, {0, 1});
  PolyVectorField x = rotational(w);
  CHECK(x.components[0].is_zero());
  CHECK(x.components[1].is_zero());
  CHECK(x.components[2].is_zero());
  CHECK(x.components[3] == -MultiPoly::constant(n, GaussianRational(1)));

  // Closed form: zero field.
  CHECK(rotational(dz(n, {0, 1})).is_zero());

  Rng rng(131);
  for (int t = 0; t < 30; ++t) {
    PolyForm a = random_form(rng, n, n - 2, rng.int_in(0, 2));
    PolyVectorField rot = rotational(a);
    CHECK(contract(volume_form(n), rot) == exterior_derivative(a));
  }
}

TEST_CASE("affine chart restriction") {
  int n = 3;
  // w = z0 z1 dz1 ^ dz2 + z2^2 dz0 ^ dz1 in the chart z0 = 1: the dz0 term
  // drops and z0 becomes 1.
  PolyForm w = (MultiPoly::variable(n, 0) * MultiPoly::variable(n, 1)) * dz(n, {1, 2}) +
               (MultiPoly::variable(n, 2) * MultiPoly::variable(n, 2)) * dz(n, {0, 1});
  PolyForm chart = affine_chart(w, 0);
  CHECK(chart.nvars() == 2);
  REQUIRE(chart.coefficient({0, 1}) != nullptr);
  CHECK(*chart.coefficient({0, 1}) == MultiPoly::variable(2, 0));
}
