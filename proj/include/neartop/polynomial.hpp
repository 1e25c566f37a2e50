#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neartop/combinatorics.hpp"
#include "neartop/rational.hpp"

namespace neartop {

/**
 * Dense univariate polynomial over exact rationals in the variable p.
 * Coefficients are stored in ascending powers; trailing zeros are trimmed so
 * the representation is canonical. degree() of the zero polynomial is the
 * sentinel -1.
 */
class UniPoly {
 public:
  UniPoly() = default;

  explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UniPoly constant(const Rational& v) { return UniPoly({v}); }

  /// c * p^k.
  static UniPoly monomial(const Rational& coeff, int power) {
    if (power < 0) throw std::domain_error("UniPoly::monomial: negative power");
    std::vector<Rational> v(power + 1, Rational(0));
    v[power] = coeff;
    return UniPoly(std::move(v));
  }

  /// c * p^i * q^j with q substituted by 1 - p, expanded into powers of p.
  static UniPoly from_pq_term(const Rational& coeff, int i, int j) {
    if (i < 0 || j < 0) throw std::domain_error("UniPoly::from_pq_term: negative power");
    std::vector<Rational> v(i + j + 1, Rational(0));
    // (1-p)^j = sum_r C(j,r) (-p)^r
    for (int r = 0; r <= j; ++r) {
      Rational term = coeff * Rational(binomial(j, r));
      if (r % 2 == 1) term = -term;
      v[i + r] += term;
    }
    return UniPoly(std::move(v));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }

  bool is_zero() const { return c_.empty(); }

  /// Coefficient of p^i, 0 beyond the degree.
  const Rational& coeff(int i) const {
    static const Rational kZero(0);
    if (i < 0 || i >= static_cast<int>(c_.size())) return kZero;
    return c_[i];
  }

  const std::vector<Rational>& coefficients() const { return c_; }

  UniPoly operator+(const UniPoly& o) const {
    std::vector<Rational> v(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] += o.c_[i];
    return UniPoly(std::move(v));
  }

  UniPoly operator-(const UniPoly& o) const {
    std::vector<Rational> v(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) v[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) v[i] -= o.c_[i];
    return UniPoly(std::move(v));
  }

  UniPoly operator-() const {
    std::vector<Rational> v = c_;
    for (auto& x : v) x = -x;
    return UniPoly(std::move(v));
  }

  UniPoly operator*(const UniPoly& o) const {
    if (c_.empty() || o.c_.empty()) return UniPoly();
    std::vector<Rational> v(c_.size() + o.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) v[i + j] += c_[i] * o.c_[j];
    return UniPoly(std::move(v));
  }

  UniPoly operator*(const Rational& s) const {
    std::vector<Rational> v = c_;
    for (auto& x : v) x *= s;
    return UniPoly(std::move(v));
  }

  bool operator==(const UniPoly& o) const { return c_ == o.c_; }

  UniPoly derivative() const {
    if (c_.size() <= 1) return UniPoly();
    std::vector<Rational> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return UniPoly(std::move(v));
  }

  /// Exact Horner evaluation.
  Rational operator()(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /**
   * Interval Horner evaluation: rigorous enclosure of f([a, b]).
   * Each step takes the min/max of the four endpoint products, so the result
   * contains f(x) for every x in [a, b]. Width shrinks linearly with b - a.
   */
  std::pair<Rational, Rational> eval_interval(const Rational& a, const Rational& b) const {
    if (a > b) throw std::invalid_argument("eval_interval: a > b");
    Rational lo(0), hi(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      Rational p1 = lo * a, p2 = lo * b, p3 = hi * a, p4 = hi * b;
      Rational nlo = std::min(std::min(p1, p2), std::min(p3, p4));
      Rational nhi = std::max(std::max(p1, p2), std::max(p3, p4));
      lo = nlo + *it;
      hi = nhi + *it;
    }
    return {lo, hi};
  }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      if (sgn(c_[i]) == 0) continue;
      if (!out.empty()) out += sgn(c_[i]) > 0 ? " + " : " - ";
      else if (sgn(c_[i]) < 0) out += "-";
      Rational a = abs(c_[i]);
      if (i == 0 || a != 1) out += neartop::to_string(a);
      if (i >= 1) {
        if (a != 1) out += "*";
        out += "p";
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out.empty() ? "0" : out;
  }

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }

  std::vector<Rational> c_;  // ascending powers
};

/// Exact evaluation of f at x (free-function form of UniPoly::operator()).
inline Rational poly_eval(const UniPoly& f, const Rational& x) { return f(x); }

}  // namespace neartop
