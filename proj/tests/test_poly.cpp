#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logfol/multipoly.hpp"
#include "logfol/prng.hpp"

using namespace logfol;

namespace {

MultiPoly var(int nvars, int j) { return MultiPoly::variable(nvars, j); }

ExactVector exact_vec(std::initializer_list<int> vals) {
  ExactVector v(static_cast<int>(vals.size()));
  int i = 0;
  for (int x : vals) v(i++) = GaussianRational(x);
  return v;
}

}  // namespace

TEST_CASE("ring arithmetic basics") {
  int n = 3;
  MultiPoly z0 = var(n, 0), z1 = var(n, 1), z2 = var(n, 2);
  CHECK((z0 + z1) * (z0 - z1) == z0 * z0 - z1 * z1);
  CHECK((z0 * MultiPoly::zero(n)).is_zero());

  MultiPoly square = (z0 + z1 + z2) * (z0 + z1 + z2);
  CHECK(square.term_count() == 6);
  MultiPoly expected = z0 * z0 + z1 * z1 + z2 * z2 + GaussianRational(2) * (z0 * z1 + z0 * z2 + z1 * z2);
  CHECK(square == expected);
}

TEST_CASE("ring axioms on random triples") {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    MultiPoly a = random_poly(rng, 3, rng.int_in(0, 2), false);
    MultiPoly b = random_poly(rng, 3, rng.int_in(0, 2), false);
    MultiPoly c = random_poly(rng, 3, rng.int_in(0, 2), false);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
  }
}

TEST_CASE("partial derivatives") {
  int n = 3;
  MultiPoly z0 = var(n, 0), z1 = var(n, 1), z2 = var(n, 2);
  CHECK((z0 * z0 * z1).derivative(0) == GaussianRational(2) * (z0 * z1));
  CHECK(MultiPoly::constant(n, GaussianRational(5)).derivative(0).is_zero());
  MultiPoly f = z0 * z0 * z0 + z1 * z1 * z1 + z0 * z1 * z2;
  CHECK(f.derivative(2) == z0 * z1);
  CHECK_THROWS_AS(f.derivative(3), std::out_of_range);
}

TEST_CASE("homogeneous degree with Euler verification") {
  int n = 2;
  MultiPoly z0 = var(n, 0), z1 = var(n, 1);
  CHECK(*(z0 * z0 * z1).homogeneous_degree() == 3);
  CHECK(!(z0 + z1 * z1).homogeneous_degree().has_value());
  CHECK_THROWS_AS(MultiPoly::zero(n).homogeneous_degree(), std::invalid_argument);

  Rng rng(11);
  MultiPoly cubic = random_poly(rng, 4, 3, true);
  CHECK(*cubic.homogeneous_degree() == 3);
}

TEST_CASE("single-divisor division gives quotient witnesses") {
  int n = 3;
  MultiPoly z0 = var(n, 0), z1 = var(n, 1), z2 = var(n, 2);
  MultiPoly f = z0 + z1;
  MultiPoly g = f * (z0 * z0 - z2 * z2);
  auto q = divides(f, g);
  REQUIRE(q.has_value());
  CHECK(*q == z0 * z0 - z2 * z2);
  CHECK(!divides(f, g + z0).has_value());
  CHECK_THROWS_AS(divides(MultiPoly::zero(n), g), std::invalid_argument);
}

TEST_CASE("divides round-trips on random pairs and rejects stray monomials") {
  Rng rng(23);
  for (int t = 0; t < 100; ++t) {
    MultiPoly f = random_poly(rng, 3, rng.int_in(1, 2), false);
    MultiPoly q = random_poly(rng, 3, rng.int_in(0, 2), false);
    auto w = divides(f, f * q);
    REQUIRE(w.has_value());
    CHECK(*w == q);
    CHECK(f * *w == f * q);

    // A monomial of degree below f's minimum cannot be divisible by f.
    ExpVec e(3, 0);
    MultiPoly m = MultiPoly::monomial(3, e, GaussianRational(1));
    if (!divides(f, m).has_value()) CHECK(!divides(f, f * q + m).has_value());
  }
}

TEST_CASE("restriction to lines") {
  int n = 2;
  MultiPoly z0 = var(n, 0), z1 = var(n, 1);
  UniPoly t_sq = (z0 * z1).restrict_line(exact_vec({0, 0}), exact_vec({1, 1}));
  CHECK(t_sq == UniPoly({GaussianRational(0), GaussianRational(0), GaussianRational(1)}));

  UniPoly one_plus = (z0 * z0 + z1 * z1).restrict_line(exact_vec({1, 0}), exact_vec({0, 1}));
  CHECK(one_plus == UniPoly({GaussianRational(1), GaussianRational(0), GaussianRational(1)}));

  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    MultiPoly f = random_poly(rng, 3, 3, false);
    ExactVector base(3), dir(3);
    for (int i = 0; i < 3; ++i) {
      base(i) = GaussianRational(rng.int_in(-4, 4));
      dir(i) = GaussianRational(rng.nonzero_int(4));
    }
    CHECK(f.restrict_line(base, dir).degree() <= f.degree());

    MultiPoly g = random_poly(rng, 3, 2, false);
    CHECK((f * g).restrict_line(base, dir) == f.restrict_line(base, dir) * g.restrict_line(base, dir));
  }
}

TEST_CASE("univariate gcd") {
  GaussianRational one(1);
  UniPoly t2_minus_1({GaussianRational(-1), GaussianRational(0), one});
  UniPoly t_minus_1({GaussianRational(-1), one});
  CHECK(uni_gcd(t2_minus_1, t_minus_1) == t_minus_1);

  UniPoly t2_plus_1({one, GaussianRational(0), one});
  UniPoly t_plus_2({GaussianRational(2), one});
  CHECK(uni_gcd(t2_plus_1, t_plus_2) == UniPoly::constant(one));

  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    auto random_uni = [&](int deg) {
      std::vector<GaussianRational> cs;
      for (int k = 0; k < deg; ++k) cs.emplace_back(rng.int_in(-5, 5));
      cs.emplace_back(rng.nonzero_int(5));
      return UniPoly(std::move(cs));
    };
    UniPoly p = random_uni(2);
    UniPoly q = random_uni(2);
    UniPoly r = random_uni(2);
    if (uni_gcd(q, r).degree() != 0) continue;  // want coprime cofactors
    UniPoly g = uni_gcd(p * q, p * r);
    CHECK(g == p.monic());
  }

  CHECK_THROWS_AS(uni_gcd(UniPoly(), UniPoly()), std::invalid_argument);
}

TEST_CASE("sylvester resultant") {
  // Polynomials in t with coefficients in one variable s.
  int n = 1;
  MultiPoly s = MultiPoly::variable(n, 0);
  MultiPoly one = MultiPoly::constant(n, GaussianRational(1));

  // a = t - s, b = t - 2s: resultant is s up to sign.
  MultiPoly res = sylvester_resultant({-s, one}, {GaussianRational(-2) * s, one});
  CHECK((res == s || res == -s));

  // Common root: a = b = t.
  MultiPoly z = MultiPoly::zero(n);
  CHECK(sylvester_resultant({z, one}, {z, one}).is_zero());

  // Coprime in t with constant-in-s coefficients: nonzero constant.
  MultiPoly minus1 = MultiPoly::constant(n, GaussianRational(-1));
  MultiPoly minus2 = MultiPoly::constant(n, GaussianRational(-2));
  MultiPoly c = sylvester_resultant({minus1, one}, {minus2, one});
  CHECK(c.is_constant());
  CHECK(!c.is_zero());

  CHECK_THROWS_AS(sylvester_resultant({z}, {z, one}), std::invalid_argument);
}

TEST_CASE("resultant vanishing matches specialized gcd") {
  Rng rng(53);
  int n = 1;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<MultiPoly> a, b;
    for (int k = 0; k < 3; ++k) a.push_back(random_poly(rng, n, rng.int_in(0, 2), false));
    for (int k = 0; k < 3; ++k) b.push_back(random_poly(rng, n, rng.int_in(0, 2), false));
    if (a[2].is_zero() || b[2].is_zero()) continue;
    MultiPoly res = sylvester_resultant(a, b);

    for (int probe = 0; probe < 5; ++probe) {
      ExactVector s0(1);
      s0(0) = GaussianRational(rng.int_in(-20, 20));
      GaussianRational lc_a = a[2].eval_exact(s0), lc_b = b[2].eval_exact(s0);
      if (lc_a.is_zero() || lc_b.is_zero()) continue;  // classical degeneracy, excluded

      auto specialize = [&](const std::vector<MultiPoly>& cs) {
        std::vector<GaussianRational> u;
        for (const auto& c : cs) u.push_back(c.eval_exact(s0));
        return UniPoly(std::move(u));
      };
      bool res_zero = res.eval_exact(s0).is_zero();
      bool gcd_nonconstant = uni_gcd(specialize(a), specialize(b)).degree() >= 1;
      CHECK(res_zero == gcd_nonconstant);
    }
  }
}

TEST_CASE("compiled evaluation matches exact evaluation") {
  Rng rng(61);
  MultiPoly f = random_poly(rng, 3, 3, false);
  CompiledPoly cf = compile(f);
  std::vector<std::complex<double>> pt{{0.3, -0.2}, {1.5, 0.0}, {-0.7, 0.4}};
  CHECK(std::abs(cf.eval(pt) - f.eval(pt)) < 1e-12);
}
