#include "logfol/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace logfol {

GaussianRational inverse(const GaussianRational& a) {
  if (a.is_zero()) throw std::domain_error("GaussianRational: division by zero");
  Rational n = a.norm2();
  return {a.re / n, -a.im / n};
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  *this *= inverse(o);
  return *this;
}

namespace {

std::string strip_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

// One term of a scalar literal: optional sign, optional number (a or a/b),
// optional trailing 'i'. Advances pos past the term.
struct Term {
  Rational value;
  bool imaginary = false;
};

Term parse_term(const std::string& s, size_t& pos) {
  Term t;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = s[pos] == '-';
    ++pos;
  }
  size_t digits_begin = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  std::string num(s, digits_begin, pos - digits_begin);
  std::string den = "1";
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    size_t den_begin = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    den.assign(s, den_begin, pos - den_begin);
    if (den.empty()) throw std::invalid_argument("scalar literal: missing denominator in '" + s + "'");
  }
  if (pos < s.size() && s[pos] == 'i') {
    t.imaginary = true;
    ++pos;
    if (num.empty()) num = "1";  // bare "i"
  }
  if (num.empty()) throw std::invalid_argument("scalar literal: expected number in '" + s + "'");
  if (den == "0") throw std::invalid_argument("scalar literal: zero denominator in '" + s + "'");
  // Construct via division: mpq string construction does not canonicalize.
  boost::multiprecision::mpz_int n(num), d(den);
  t.value = Rational(n) / Rational(d);
  if (negative) t.value = -t.value;
  return t;
}

}  // namespace

GaussianRational parse_scalar(std::string_view text) {
  std::string s = strip_ws(text);
  if (s.empty()) throw std::invalid_argument("scalar literal: empty string");
  size_t pos = 0;
  GaussianRational out;
  bool saw_real = false, saw_imag = false;
  for (int k = 0; k < 2 && pos < s.size(); ++k) {
    Term t = parse_term(s, pos);
    if (t.imaginary) {
      if (saw_imag) throw std::invalid_argument("scalar literal: two imaginary parts in '" + s + "'");
      out.im = t.value;
      saw_imag = true;
    } else {
      if (saw_real) throw std::invalid_argument("scalar literal: two real parts in '" + s + "'");
      out.re = t.value;
      saw_real = true;
    }
  }
  if (pos != s.size()) throw std::invalid_argument("scalar literal: trailing characters in '" + s + "'");
  return out;
}

Rational parse_rational(std::string_view text) {
  GaussianRational v = parse_scalar(text);
  if (!v.is_real()) throw std::invalid_argument("expected a real rational literal");
  return v.re;
}

std::string format_rational(const Rational& v) {
  return boost::multiprecision::numerator(v).str() + "/" +
         boost::multiprecision::denominator(v).str();
}

std::string format_scalar(const GaussianRational& v) {
  if (v.is_zero()) return "0/1";
  std::string out;
  if (v.re != 0) out = format_rational(v.re);
  if (v.im != 0) {
    if (v.im > 0 && !out.empty()) out += "+";
    if (v.im < 0) out += "-";
    out += format_rational(boost::multiprecision::abs(v.im));
    out += " i";
  }
  return out;
}

}  // namespace logfol
