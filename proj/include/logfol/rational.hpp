#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <string>
#include <string_view>

namespace logfol {

/// Exact rational scalar. GMP-backed; always kept canonical (positive
/// denominator, reduced to lowest terms, zero is 0/1).
using Rational = boost::multiprecision::mpq_rational;

/// Element of Q(i). All symbolic computation in this library runs over this
/// field; equality is exact componentwise equality.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(long v) : re(v), im(0) {}  // NOLINT: implicit by design
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  GaussianRational conj() const { return {re, -im}; }

  /// re^2 + im^2 (exact).
  Rational norm2() const { return re * re + im * im; }

  std::complex<double> approx() const {
    return {re.convert_to<double>(), im.convert_to<double>()};
  }

  GaussianRational operator-() const { return {-re, -im}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) {
    a += b;
    return a;
  }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) {
    a -= b;
    return a;
  }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) {
    a *= b;
    return a;
  }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) {
    a /= b;
    return a;
  }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }
};

GaussianRational inverse(const GaussianRational& a);

/// Parses "a/b", "a", "a/b+c/d i", "c/d i", "i", "-i", ... (whitespace
/// insensitive; a bare "i" means 0+1i). Throws std::invalid_argument on
/// malformed input.
GaussianRational parse_scalar(std::string_view text);

Rational parse_rational(std::string_view text);

/// Canonical literal: "a/b", "a/b+c/d i", "c/d i" or "0/1". Round-trips
/// through parse_scalar.
std::string format_scalar(const GaussianRational& v);

std::string format_rational(const Rational& v);

}  // namespace logfol
