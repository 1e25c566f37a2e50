#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace neartop {

/// Arbitrary-precision signed integer. All integer quantities produced by this
/// library (binomials, layer numerators, dyadic denominators) are exact.
using Integer = mpz_class;

/// Exact rational number. Invariant: canonical form (positive denominator,
/// numerator and denominator coprime). gmp maintains canonical form for all
/// arithmetic results; explicitly constructed values go through make_rational.
using Rational = mpq_class;

/// Sign of x as -1, 0, or +1. Wraps the gmp primitive so callers outside
/// this namespace can qualify it.
inline int sgn(const Rational& x) { return mpq_sgn(x.get_mpq_t()); }
inline int sgn(const Integer& x) { return mpz_sgn(x.get_mpz_t()); }

/// Builds num/den in canonical form.
inline Rational make_rational(const Integer& num, const Integer& den) {
  if (sgn(den) == 0) throw std::domain_error("make_rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational make_rational(long num, long den) {
  return make_rational(Integer(num), Integer(den));
}

/// base^exp for nonnegative integer exponents.
inline Integer ipow(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline Rational rpow(const Rational& base, unsigned long exp) {
  Integer num = ipow(base.get_num(), exp);
  Integer den = ipow(base.get_den(), exp);
  return make_rational(num, den);  // coprime parts stay coprime under powers
}

/// Renders x as "num" or "num/den" (canonical form, exact).
inline std::string to_string(const Rational& x) { return x.get_str(); }

inline double to_double(const Rational& x) { return x.get_d(); }

/// Decimal rendering truncated (not rounded) toward zero after `digits`
/// fractional digits. Truncation semantics are part of the reporting contract:
/// 0.4689899 at 6 digits renders "0.468989", never "0.468990".
inline std::string truncate_decimal(const Rational& x, unsigned digits) {
  Integer scale = ipow(Integer(10), digits);
  Integer scaled = x.get_num() * scale;
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
  bool neg = sgn(q) < 0;
  Integer a = abs(q);
  Integer ip = a / scale;
  Integer fp = a % scale;
  std::string frac = fp.get_str();
  frac.insert(0, digits - frac.size(), '0');
  std::string out = ip.get_str() + "." + frac;
  if (neg) out.insert(0, 1, '-');
  return out;
}

/// Parses an exact rational from either "num/den" or a decimal string with an
/// optional exponent. Decimal parsing is exact base-10: "0.47" means 47/100,
/// "1e-7" means 1/10^7. Throws std::invalid_argument on malformed input.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
    Integer num, den;
    if (ns.empty() || ds.empty() || num.set_str(ns, 10) != 0 || den.set_str(ds, 10) != 0)
      throw std::invalid_argument("parse_rational: bad fraction: " + text);
    return make_rational(num, den);
  }
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') neg = (text[i++] == '-');
  std::string digits;
  long frac_digits = 0, exponent = 0;
  bool saw_digit = false, saw_dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      digits += c;
      saw_digit = true;
      if (saw_dot) ++frac_digits;
    } else if (c == '.' && !saw_dot) {
      saw_dot = true;
    } else if ((c == 'e' || c == 'E') && saw_digit) {
      char* end = nullptr;
      exponent = std::strtol(text.c_str() + i + 1, &end, 10);
      if (end != text.c_str() + text.size() || end == text.c_str() + i + 1)
        throw std::invalid_argument("parse_rational: bad exponent: " + text);
      break;
    } else {
      throw std::invalid_argument("parse_rational: bad character in: " + text);
    }
  }
  if (!saw_digit) throw std::invalid_argument("parse_rational: no digits in: " + text);
  Integer num;
  if (num.set_str(digits.empty() ? "0" : digits, 10) != 0)
    throw std::invalid_argument("parse_rational: bad digits in: " + text);
  if (neg) num = -num;
  long e = exponent - frac_digits;
  if (e >= 0) return make_rational(num * ipow(Integer(10), e), Integer(1));
  return make_rational(num, ipow(Integer(10), -e));
}

}  // namespace neartop
