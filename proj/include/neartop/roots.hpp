#pragma once

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "neartop/polynomial.hpp"
#include "neartop/rational.hpp"

namespace neartop {

/**
 * Exact interval certified to contain a sign change (or, when lo == hi, an
 * exact root). Endpoints are exact rationals so every comparison made with a
 * bracket is rigorous.
 */
struct Bracket {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool degenerate() const { return lo == hi; }
};

/**
 * Sign evaluator in {-1, 0, +1}. Deterministic by contract: the same point
 * always yields the same sign. Wrapping a function as a sign oracle (rather
 * than manipulating it as a polynomial) is deliberate: the continuation value
 * of the stopping problem is only piecewise polynomial in p, so algebraic
 * root-finding machinery does not apply to it. Exact-sign bisection does.
 */
using SignOracle = std::function<int(const Rational&)>;

/// Raised when a supposed bracket has equal signs at both endpoints.
class bracket_error : public std::invalid_argument {
 public:
  bracket_error(const std::string& what, int sign_lo, int sign_hi)
      : std::invalid_argument(what), sign_lo(sign_lo), sign_hi(sign_hi) {}
  int sign_lo;
  int sign_hi;
};

/**
 * Shrinks a sign-change bracket to width <= width_target by bisection.
 *
 * Probe points are dyadic rationals: with current width w, the probe is
 * floor(midpoint * 2^g) / 2^g for the smallest g with 2^-g <= w/4. The probe
 * then lies in (lo + w/4, lo + w/2], so each step shrinks the bracket by at
 * least a factor 3/4 while keeping probe denominators at 2^g. Downstream this
 * bounds the big-integer growth of the exact DP evaluated at probe points.
 *
 * If the oracle returns 0 at a probe the function returns the degenerate
 * bracket {probe, probe}: an exact root terminates the search.
 *
 * sign_lo / sign_hi may pass already-known endpoint signs (0 = unknown, the
 * endpoint is then evaluated). Endpoints with equal signs raise bracket_error.
 */
inline Bracket isolate_root(const SignOracle& oracle, Bracket bracket,
                            const Rational& width_target, int sign_lo = 0,
                            int sign_hi = 0) {
  if (sgn(width_target) <= 0)
    throw std::invalid_argument("isolate_root: width_target must be positive");
  if (bracket.lo > bracket.hi)
    throw std::invalid_argument("isolate_root: lo > hi");
  if (bracket.degenerate()) return bracket;
  int slo = sign_lo != 0 ? sign_lo : oracle(bracket.lo);
  if (slo == 0) return {bracket.lo, bracket.lo};
  int shi = sign_hi != 0 ? sign_hi : oracle(bracket.hi);
  if (shi == 0) return {bracket.hi, bracket.hi};
  if (slo == shi)
    throw bracket_error("isolate_root: endpoints do not bracket a sign change",
                        slo, shi);
  unsigned long g = 2;
  Integer two_g = 4;  // 2^g
  while (bracket.width() > width_target) {
    Rational w = bracket.width();
    while (Rational(two_g) * w < 4) {
      ++g;
      two_g *= 2;
    }
    Rational mid = (bracket.lo + bracket.hi) / 2;
    Integer num;
    mpz_fdiv_q(num.get_mpz_t(), Integer(mid.get_num() * two_g).get_mpz_t(),
               mid.get_den().get_mpz_t());
    Rational probe = make_rational(num, two_g);
    if (probe <= bracket.lo) probe += make_rational(Integer(1), two_g);
    int s = oracle(probe);
    if (s == 0) return {probe, probe};
    if (s == slo)
      bracket.lo = probe;
    else
      bracket.hi = probe;
  }
  return bracket;
}

/**
 * Upper bound on the number of roots of f in the open interval (a, b), by the
 * sign-variation rule applied to the coefficients of
 * (1+t)^deg(f) * f((a + b t)/(1 + t)), which maps t in (0, inf) onto (a, b).
 * A count of 0 certifies the interval root-free; 1 certifies exactly one root.
 */
inline int root_count_bound(const UniPoly& f, const Rational& a, const Rational& b) {
  int d = f.degree();
  if (d < 0) throw std::invalid_argument("root_count_bound: zero polynomial");
  if (!(a < b)) throw std::invalid_argument("root_count_bound: requires a < b");
  // Powers of (a + b t) and (1 + t).
  std::vector<UniPoly> num_pow(d + 1), den_pow(d + 1);
  num_pow[0] = UniPoly::constant(Rational(1));
  den_pow[0] = UniPoly::constant(Rational(1));
  UniPoly lin_num({a, b}), lin_den({Rational(1), Rational(1)});
  for (int i = 1; i <= d; ++i) {
    num_pow[i] = num_pow[i - 1] * lin_num;
    den_pow[i] = den_pow[i - 1] * lin_den;
  }
  UniPoly acc;
  for (int i = 0; i <= d; ++i) {
    if (sgn(f.coeff(i)) == 0) continue;
    acc = acc + num_pow[i] * den_pow[d - i] * f.coeff(i);
  }
  int variations = 0, last = 0;
  for (const Rational& c : acc.coefficients()) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

/**
 * Result of rigorous minimization: lower <= min f <= upper over the interval,
 * upper - lower <= tol, plus a bracket containing a minimizer (degenerate when
 * the minimizer is an endpoint or an exactly-hit critical point).
 */
struct MinimizeResult {
  Bracket argmin;
  Rational lower;
  Rational upper;
};

namespace detail {

struct MinCell {
  Rational a, b;     // a == b for point cells
  int sa = 0, sb = 0;  // derivative signs at the ends (interval cells only)
  bool sign_change = false;
  Rational enc_lo{0}, enc_hi{0};
};

inline void enclose(const UniPoly& f, MinCell& cell) {
  if (cell.a == cell.b) {
    cell.enc_lo = cell.enc_hi = f(cell.a);
  } else {
    auto e = f.eval_interval(cell.a, cell.b);
    cell.enc_lo = e.first;
    cell.enc_hi = e.second;
  }
}

}  // namespace detail

/**
 * Rigorous bounds on min f over [lo, hi] with bound gap <= tol.
 *
 * The minimum of a polynomial over a compact interval is attained at an
 * endpoint or at a root of f'. Candidate cells therefore cover exactly those
 * places: the two endpoints (exact point values), every grid cell where f'
 * changes sign, every grid point where f' vanishes, and every equal-sign cell
 * the variation bound cannot certify root-free. The initial grid has 1024
 * equal cells; when the variation bound over the whole interval is fully
 * accounted for by the sign changes found, the per-cell certification is
 * skipped wholesale. Candidate enclosures (interval Horner) bound the minimum
 * from both sides; cells whose lower enclosure exceeds the global upper bound
 * are dropped, and the binding cell is split until the gap closes.
 */
inline MinimizeResult minimize_on_interval(const UniPoly& f, const Rational& lo,
                                           const Rational& hi, const Rational& tol) {
  if (lo > hi) throw std::invalid_argument("minimize_on_interval: lo > hi");
  if (sgn(tol) <= 0)
    throw std::invalid_argument("minimize_on_interval: tol must be positive");
  if (lo == hi || f.degree() <= 0) {
    Rational v = f(lo);
    return {{lo, lo}, v, v};
  }
  UniPoly fp = f.derivative();
  std::vector<detail::MinCell> cells;
  cells.push_back({lo, lo});
  cells.push_back({hi, hi});
  const int kGrid = 1024;
  Rational step = (hi - lo) / kGrid;
  std::vector<int> gs(kGrid + 1);
  std::vector<Rational> xs(kGrid + 1);
  int interior_zeros = 0;
  for (int i = 0; i <= kGrid; ++i) {
    xs[i] = lo + step * i;
    gs[i] = sgn(fp(xs[i]));
    if (gs[i] == 0 && i > 0 && i < kGrid) {
      cells.push_back({xs[i], xs[i]});
      ++interior_zeros;
    }
  }
  int sign_changes = 0;
  for (int i = 0; i < kGrid; ++i)
    if (gs[i] * gs[i + 1] < 0) ++sign_changes;
  // When every root the variation bound allows is already visible as a sign
  // change or a grid zero, the equal-sign cells are root-free and need no
  // individual certification.
  bool all_accounted =
      sign_changes + interior_zeros == root_count_bound(fp, lo, hi);
  for (int i = 0; i < kGrid; ++i) {
    detail::MinCell cell{xs[i], xs[i + 1]};
    cell.sa = gs[i];
    cell.sb = gs[i + 1];
    if (cell.sa * cell.sb < 0) {
      cell.sign_change = true;
      cells.push_back(cell);
    } else if (!all_accounted && root_count_bound(fp, cell.a, cell.b) > 0) {
      cells.push_back(cell);
    }
  }
  for (auto& c : cells) detail::enclose(f, c);

  const int kMaxIter = 100000;
  for (int iter = 0;; ++iter) {
    Rational upper = cells.front().enc_hi;
    for (std::size_t i = 1; i < cells.size(); ++i)
      if (cells[i].enc_hi < upper) upper = cells[i].enc_hi;
    // Drop cells that provably lie above the minimum.
    std::vector<detail::MinCell> kept;
    kept.reserve(cells.size());
    for (auto& c : cells)
      if (!(c.enc_lo > upper)) kept.push_back(std::move(c));
    cells = std::move(kept);
    Rational lower = cells.front().enc_lo;
    for (std::size_t i = 1; i < cells.size(); ++i)
      if (cells[i].enc_lo < lower) lower = cells[i].enc_lo;
    bool have_interval_cell = false;
    std::size_t binding = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].a == cells[i].b) continue;
      if (!have_interval_cell || cells[i].enc_lo < cells[binding].enc_lo) {
        have_interval_cell = true;
        binding = i;
      }
    }
    // A gap can stay open only through an interval cell: a point cell's
    // enclosure is exact, so if only points remain, upper meets lower.
    if (upper - lower <= tol || !have_interval_cell) {
      for (const auto& c : cells)
        if (c.enc_hi == upper) return {{c.a, c.b}, lower, upper};
      return {{cells.front().a, cells.front().b}, lower, upper};
    }
    if (iter >= kMaxIter)
      throw std::runtime_error("minimize_on_interval: refinement stalled");
    detail::MinCell cell = cells[binding];
    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(binding));
    Rational mid = (cell.a + cell.b) / 2;
    int sm = sgn(fp(mid));
    if (sm == 0) {
      detail::MinCell pt{mid, mid};
      detail::enclose(f, pt);
      cells.push_back(std::move(pt));
    }
    auto push_half = [&](const Rational& a, const Rational& b, int sa, int sb) {
      detail::MinCell h{a, b};
      h.sa = sa;
      h.sb = sb;
      if (sa * sb < 0) {
        h.sign_change = true;
      } else if (root_count_bound(fp, a, b) == 0) {
        return;  // certified root-free; the minimum cannot hide here
      }
      detail::enclose(f, h);
      cells.push_back(std::move(h));
    };
    push_half(cell.a, mid, cell.sa, sm);
    push_half(mid, cell.b, sm, cell.sb);
  }
}

}  // namespace neartop
