#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "neartop/combinatorics.hpp"
#include "neartop/dp.hpp"
#include "neartop/polynomial.hpp"
#include "neartop/rational.hpp"
#include "neartop/roots.hpp"

namespace neartop {

/*
 * Certified inequality machinery behind the threshold-ordering results. Three
 * suites of polynomial data feed it:
 *
 *   suite a: a single degree-8 numerator whose positivity on [0, 0.47]
 *            separates p_4 from 1/2;
 *   suite b: six coefficient polynomials b_1..b_6 on [0.478, 1/2] whose
 *            combination sum_i m^i b_i(p) tracks the sign of L + R;
 *   suite c: seven coefficient polynomials b_0..b_6 on [0.4925, 1/2] for the
 *            long-shift comparison.
 *
 * Everything here is exact: minima are certified enclosures from the
 * branch-and-bound minimizer, sign claims are integer sign computations, and
 * the closed forms are tested for exact equality against the dynamic-program
 * definitions they compress.
 */

namespace detail {

inline UniPoly int_poly(std::initializer_list<long> coeffs) {
  std::vector<Rational> v;
  v.reserve(coeffs.size());
  for (long c : coeffs) v.emplace_back(c);
  return UniPoly(std::move(v));
}

}  // namespace detail

/// Degree-8 numerator controlling the suite-a separation, ascending powers.
inline UniPoly suite_a_numerator() {
  return detail::int_poly({50, -153, 56, 49, 50, 49, 50, 49, 50});
}

struct SuiteACheck {
  Rational derivative_upper;  // certified upper bound for f' on [0, 1/2]
  bool derivative_negative = false;
  Rational boundary_point;  // right end of the claimed positivity range
  Rational boundary_value;  // f at that point
  bool positive_at_boundary = false;
  bool passed = false;
};

/**
 * Certifies f > 0 on [0, 47/100] for f = suite_a_numerator: the derivative is
 * bounded above by a negative number on [0, 1/2] (so f decreases), and f is
 * still positive at 47/100. Both facts are rigorous, not floating-point.
 */
inline SuiteACheck suite_a_positivity_check(
    const Rational& tol = make_rational(1, 1000000000)) {
  UniPoly f = suite_a_numerator();
  MinimizeResult neg = minimize_on_interval(-f.derivative(), Rational(0),
                                            make_rational(1, 2), tol);
  SuiteACheck out;
  out.derivative_upper = -neg.lower;  // max f' = -min(-f')
  out.derivative_negative = sgn(out.derivative_upper) < 0;
  out.boundary_point = make_rational(47, 100);
  out.boundary_value = f(out.boundary_point);
  out.positive_at_boundary = sgn(out.boundary_value) > 0;
  out.passed = out.derivative_negative && out.positive_at_boundary;
  return out;
}

enum class Suite { b, c };

/**
 * A family of coefficient polynomials b_i on a fixed p-interval, combined as
 * pol(m, p) = sum_i m^i b_i(p). Suite b has indices 1..6 on [239/500, 1/2];
 * suite c has indices 0..6 on [197/400, 1/2].
 */
struct BSystem {
  Suite suite = Suite::b;
  std::map<int, UniPoly> coeff;
  Rational p_lo, p_hi;

  /// The combined polynomial in p for a fixed index value m.
  UniPoly pol(long m) const {
    if (m < 0) throw std::domain_error("BSystem::pol: negative index");
    UniPoly acc;
    for (const auto& [i, bi] : coeff)
      acc = acc + bi * Rational(ipow(Integer(m), static_cast<unsigned long>(i)));
    return acc;
  }
};

inline BSystem b_system(Suite s) {
  using detail::int_poly;
  BSystem sys;
  sys.suite = s;
  if (s == Suite::b) {
    sys.p_lo = make_rational(239, 500);
    sys.p_hi = make_rational(1, 2);
    sys.coeff.emplace(1, int_poly({24, -108, 144, -72, 72, -72, 24}));
    sys.coeff.emplace(2, int_poly({8, 36, -280, 316, 128, -228, 60}));
    sys.coeff.emplace(3, int_poly({-66, 195, -108, -72, 78, 72, -48}));
    sys.coeff.emplace(4, int_poly({-76, -15, 722, -572, -652, 852, -228}));
    sys.coeff.emplace(5, int_poly({-30, -87, 468, 0, -1014, 864, -192}));
    sys.coeff.emplace(6, int_poly({-4, -21, 62, 112, -340, 240, -48}));
  } else {
    sys.p_lo = make_rational(197, 400);
    sys.p_hi = make_rational(1, 2);
    sys.coeff.emplace(0, int_poly({96, -432, 768, -1056, 864, 960, -2304, 1440, -288}));
    sys.coeff.emplace(1, int_poly({56, 36, -448, -840, 1832, 2952, -6632, 3984, -768}));
    sys.coeff.emplace(2, int_poly({-256, 816, -976, 1284, -1240, -204, 2140, -1728, 408}));
    sys.coeff.emplace(3, int_poly({-370, 135, 860, 5160, -7690, -9720, 23200, -14160, 2760}));
    sys.coeff.emplace(4, int_poly({-196, -363, 602, 6636, -7324, -14100, 27724, -15840, 2928}));
    sys.coeff.emplace(5, int_poly({-46, -171, -52, 2880, -1702, -8352, 13312, -7104, 1248}));
    sys.coeff.emplace(6, int_poly({-4, -21, -34, 336, 140, -1776, 2320, -1152, 192}));
  }
  return sys;
}

struct CoefficientMinimum {
  int index = 0;
  MinimizeResult minimum;
};

/// Certified minimum of every coefficient polynomial over the system
/// interval, highest index first (the order the bounds are usually quoted).
inline std::vector<CoefficientMinimum> b_minima(const BSystem& sys,
                                                const Rational& tol) {
  std::vector<CoefficientMinimum> out;
  for (auto it = sys.coeff.rbegin(); it != sys.coeff.rend(); ++it)
    out.push_back({it->first,
                   minimize_on_interval(it->second, sys.p_lo, sys.p_hi, tol)});
  return out;
}

struct PolPositivity {
  /// Lower-bound polynomial in the index variable: coefficient i is a
  /// certified lower bound of b_i over the interval, so certified(m) bounds
  /// pol(m, p) from below for every m >= 0 and p in the interval.
  UniPoly certified;
  bool integer_positive = false;
  long first_nonpositive = -1;
  /// Sign variations of the certified coefficients: 1 means exactly one
  /// positive root, so positivity at the range start extends to all larger m.
  int sign_variations = 0;
  std::optional<Bracket> positive_root;
  std::optional<Bracket> display_root;
  std::optional<bool> display_integer_positive;
};

namespace detail {

inline int positive_axis_variations(const UniPoly& f) {
  int variations = 0, last = 0;
  for (const Rational& c : f.coefficients()) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

/// Brackets the sign change of f on the positive axis by doubling from
/// 1/1024, then isolating. Empty when no change shows up by 2^30.
inline std::optional<Bracket> bracket_positive_root(const UniPoly& f,
                                                    const Rational& width) {
  SignOracle oracle = [&](const Rational& x) { return sgn(f(x)); };
  Rational lo = make_rational(1, 1024);
  int slo = oracle(lo);
  if (slo == 0) return Bracket{lo, lo};
  Rational hi = lo;
  int shi = slo;
  for (int i = 0; i < 40 && shi == slo; ++i) {
    lo = hi;
    slo = shi;
    hi *= 2;
    shi = oracle(hi);
  }
  if (shi == 0) return Bracket{hi, hi};
  if (shi == slo) return std::nullopt;
  return isolate_root(oracle, Bracket{lo, hi}, width, slo, shi);
}

}  // namespace detail

/**
 * The positivity certificate for pol(m, p) = sum_i m^i b_i(p):
 * replaces every b_i by a certified lower bound over the p-interval,
 * checks the resulting one-variable polynomial at each integer m in
 * [m_lo, m_hi], counts its coefficient sign variations, and brackets its
 * positive root. A variation count of 1 plus positivity at m_lo certifies
 * pol(m, p) > 0 for ALL real m >= m_lo and p in the interval, not just the
 * integers scanned. An optional display polynomial (e.g. coefficients as
 * quoted elsewhere at reduced precision) is put through the same root
 * bracketing for comparison.
 */
inline PolPositivity pol_positivity(
    const BSystem& sys, long m_lo, long m_hi,
    const Rational& min_tol = make_rational(Integer(1), ipow(Integer(10), 12)),
    const Rational& root_width = make_rational(Integer(1), ipow(Integer(10), 8)),
    const UniPoly* display = nullptr) {
  if (m_lo > m_hi) throw std::domain_error("pol_positivity: empty index range");
  PolPositivity out;
  auto minima = b_minima(sys, min_tol);
  std::vector<Rational> coeffs(minima.front().index + 1, Rational(0));
  for (const auto& cm : minima) coeffs[cm.index] = cm.minimum.lower;
  out.certified = UniPoly(std::move(coeffs));
  out.integer_positive = true;
  for (long m = m_lo; m <= m_hi; ++m) {
    if (sgn(out.certified(Rational(m))) <= 0) {
      out.integer_positive = false;
      out.first_nonpositive = m;
      break;
    }
  }
  out.sign_variations = detail::positive_axis_variations(out.certified);
  out.positive_root = detail::bracket_positive_root(out.certified, root_width);
  if (display) {
    out.display_root = detail::bracket_positive_root(*display, root_width);
    bool ok = true;
    for (long m = m_lo; m <= m_hi && ok; ++m)
      ok = sgn((*display)(Rational(m))) > 0;
    out.display_integer_positive = ok;
  }
  return out;
}

/// pi_{3,k} for k = 0..5 as polynomials in p: the whole three-steps-left
/// layer of the value table in closed form.
inline std::vector<UniPoly> third_layer_values() {
  UniPoly one = UniPoly::constant(1);
  return {
      one - UniPoly::from_pq_term(1, 2, 1),  // 1 - p^2 q
      one - UniPoly::monomial(1, 2),         // 1 - p^2
      UniPoly::from_pq_term(3, 2, 1) + UniPoly::from_pq_term(1, 1, 2),
      UniPoly::monomial(1, 2),
      UniPoly::monomial(1, 3),
      UniPoly(),
  };
}

/// pi_{3,k} - pi_{3,k+1} for k = 0..4 in closed form, stated independently
/// of third_layer_values so the two routes cross-check each other.
inline std::vector<UniPoly> third_layer_decrements() {
  return {
      UniPoly::monomial(1, 3),
      UniPoly::from_pq_term(-1, 2, 1) + UniPoly::from_pq_term(2, 1, 2) +
          UniPoly::from_pq_term(1, 0, 3),
      UniPoly::monomial(-1, 3) + UniPoly::from_pq_term(2, 2, 1) +
          UniPoly::from_pq_term(1, 1, 2),
      UniPoly::from_pq_term(1, 2, 1),
      UniPoly::monomial(1, 3),
  };
}

/**
 * Closed form of fixed_policy_value(2m+4) - fixed_policy_value(2m+3):
 * one even-to-odd step of the fixed rule costs p^m q^m times a fixed
 * quartic bracket in the excursion coefficients d_{m,j}.
 */
inline Rational fixed_policy_step_closed(long m, const Rational& p) {
  if (m < 1) throw std::domain_error("fixed_policy_step_closed: requires m >= 1");
  Rational q = 1 - p;
  Rational d0(d_coeff(m, 0)), d1(d_coeff(m, 1)), d2(d_coeff(m, 2));
  Rational br = d0 * rpow(p, 4) - d1 * rpow(p, 3) * q +
                (d0 + 3 * d1 + d2) * rpow(p, 2) * rpow(q, 2) -
                (2 * d0 + 2 * d1 + d2) * p * rpow(q, 3) - (d0 + d1) * rpow(q, 4);
  return rpow(p, m) * rpow(q, m) * br;
}

/**
 * Closed form of the fixed-rule pair gap net of the stop-value pair gap:
 * [fixed_policy_value(2m+5) - fixed_policy_value(2m+3)]
 *   - [U_{2m+5} - U_{2m+3}].
 */
inline Rational fixed_policy_pair_closed(long m, const Rational& p) {
  if (m < 1) throw std::domain_error("fixed_policy_pair_closed: requires m >= 1");
  Rational q = 1 - p;
  Rational d0(d_coeff(m, 0)), d1(d_coeff(m, 1)), d2(d_coeff(m, 2)),
      d3(d_coeff(m, 3));
  Rational br = d0 * rpow(p, 5) - 2 * d1 * rpow(p, 4) * q +
                (d0 + 3 * d1 + 2 * d2) * rpow(p, 3) * rpow(q, 2) -
                (d0 + d1 + 3 * d2 + d3) * rpow(p, 2) * rpow(q, 3) -
                (3 * d0 + 4 * d1 + 2 * d2) * p * rpow(q, 4) -
                (d0 + d1) * rpow(q, 5) + catalan_t(m + 3) * rpow(p, 3) * q;
  return rpow(p, m) * rpow(q, m) * br;
}

/// U_{2m+4} - U_{2m+3} = U_{2m+5} - U_{2m+3}: the stop value drops by
/// exactly one excursion term across an odd-even pair.
inline Rational stop_value_pair_step(long m, const Rational& p) {
  if (m < 0) throw std::domain_error("stop_value_pair_step: requires m >= 0");
  return -catalan_t(m + 3) * rpow(p, m + 3) * rpow(1 - p, m + 1);
}

/**
 * The two-sided comparison quantity L + R assembled definitionally from the
 * fixed-rule values and stop values (no closed forms):
 *
 *   L = [V~(2m+4) - V~(2m+3)] - [U(2m+4) - U(2m+3)]
 *   R = [V~(2m+3) - V~(2m+1)] - [U(2m+3) - U(2m+1)]
 *
 * Its sign matches the sign of b_system(b).pol(m) on the suite-b interval;
 * that equivalence is what the sign-grid check exercises.
 */
inline Rational lr_direct(long m, const Rational& p) {
  if (m < 1) throw std::domain_error("lr_direct: requires m >= 1");
  Rational l = (fixed_policy_value(2 * m + 4, p) - fixed_policy_value(2 * m + 3, p)) -
               (max_le_one_prob(2 * m + 4, p) - max_le_one_prob(2 * m + 3, p));
  Rational r = (fixed_policy_value(2 * m + 3, p) - fixed_policy_value(2 * m + 1, p)) -
               (max_le_one_prob(2 * m + 3, p) - max_le_one_prob(2 * m + 1, p));
  return l + r;
}

/**
 * Forward differences of the cumulative law of the distance chain started at
 * 1, taken at even times, k = 0..4:
 *
 *   first[k]  = P(G_{2m+1} <= k) - P(G_{2m} <= k)
 *   second[k] = P(G_{2m+2} <= k) - P(G_{2m} <= k)
 *
 * Each comes in two routes: definitional (chain evolution) and closed form
 * in d_{m,j}. The routes must agree exactly; tests enforce that.
 */
struct DeltaTables {
  long m = 0;
  Rational p;
  std::vector<Rational> first_def, first_closed;
  std::vector<Rational> second_def, second_closed;
};

inline DeltaTables delta_p_tables(long m, const Rational& p) {
  if (m < 1) throw std::domain_error("delta_p_tables: requires m >= 1");
  Rational q = 1 - p;
  auto l0 = gap_chain_law(static_cast<int>(2 * m), 1, p);
  auto l1 = gap_chain_law(static_cast<int>(2 * m + 1), 1, p);
  auto l2 = gap_chain_law(static_cast<int>(2 * m + 2), 1, p);
  auto at = [](const std::vector<Rational>& v, int j) {
    return j < static_cast<int>(v.size()) ? v[j] : Rational(0);
  };
  DeltaTables out;
  out.m = m;
  out.p = p;
  Rational c0(0), c1(0), c2(0);
  for (int k = 0; k <= 4; ++k) {
    c0 += at(l0, k);
    c1 += at(l1, k);
    c2 += at(l2, k);
    out.first_def.push_back(c1 - c0);
    out.second_def.push_back(c2 - c0);
  }
  Rational d0(d_coeff(m, 0)), d1(d_coeff(m, 1)), d2(d_coeff(m, 2)),
      d3(d_coeff(m, 3));
  Rational pm1 = rpow(p, m - 1);  // m >= 1 keeps the exponent nonnegative
  Rational pm = pm1 * p;
  Rational qm = rpow(q, m);
  out.first_closed = {
      d0 * pm * p * qm,
      -(d0 + d1) * pm * qm * q,
      d1 * pm * qm * q,
      -(d1 + d2) * pm1 * qm * rpow(q, 2),
      d2 * pm1 * qm * rpow(q, 2),
  };
  out.second_closed = {
      d0 * pm * rpow(p, 2) * qm - d1 * pm * p * qm * q,
      -(d0 + d1) * pm * qm * rpow(q, 2),
      d1 * pm * p * qm * q - (d0 + d1 + d2) * pm * qm * rpow(q, 2),
      -(d1 + d2) * pm1 * qm * rpow(q, 3),
      d2 * pm * qm * rpow(q, 2) - (d1 + d2 + d3) * pm1 * qm * rpow(q, 3),
  };
  return out;
}

}  // namespace neartop
