#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "neartop/combinatorics.hpp"
#include "neartop/rational.hpp"

namespace neartop {

/*
 * Backward-induction engine for the stop-near-the-running-maximum problem.
 *
 * State (k, j): k steps remain and the walk sits j below its running maximum.
 * From (k, j) with j >= 1 the walk moves to (k-1, j-1) with probability p and
 * to (k-1, j+1) with probability q; from (k, 0) it moves to (k-1, 0) with
 * probability p (a fresh maximum) and to (k-1, 1) with probability q.
 * Stopping in state (k, j) wins when the remaining walk never climbs 2 or
 * more above the stopped position, which has probability U_k = P(M_k <= 1)
 * when j <= 1 and probability 0 otherwise. The only nontrivial decisions are
 * at j = 1 (at j = 0 continuing weakly dominates; the table still takes the
 * max so that dominance is checked, not assumed).
 *
 * Exact layout: with p = a/d in lowest terms, every layer-k value is an
 * integer multiple of d^{-k}. Layers hold big-integer numerators over the
 * implicit denominator d^k, so one state update is two integer multiply-adds
 * and sign decisions are integer comparisons. No rational normalization
 * happens anywhere in the hot path.
 */

namespace detail {

/// Numerators of U_k over d^k for k = 0..n_max, p = a/d.
inline std::vector<Integer> stop_value_numerators(int n_max, const Integer& a,
                                                  const Integer& d) {
  std::vector<Integer> u(n_max + 1);
  u[0] = 1;
  if (n_max >= 1) u[1] = d;
  Integer b = d - a;
  Integer ueven = 1;   // numerator of U_{2t} over d^{2t}
  Integer cat = 1;     // Catalan number C_{t-1} = t_{t+1} after the update below
  Integer ap = a;      // a^{t+1} after the update below
  Integer bp = 1;      // b^{t-1} after the update below
  for (int t = 1; 2 * t <= n_max; ++t) {
    cat *= 2 * (2 * t - 1);
    mpz_divexact_ui(cat.get_mpz_t(), cat.get_mpz_t(),
                    static_cast<unsigned long>(t + 1));
    ap *= a;
    if (t >= 2) bp *= b;
    ueven = ueven * d * d - cat * ap * bp;
    u[2 * t] = ueven;
    if (2 * t + 1 <= n_max) u[2 * t + 1] = ueven * d;
  }
  return u;
}

}  // namespace detail

/**
 * Full table of optimal win probabilities pi_{k,j} for 0 <= k <= n_max,
 * together with the stop values U_k, continuation values W_k, and the
 * stop/continue policy at the critical states (k, 1). Immutable once built.
 */
class ValueTable {
 public:
  ValueTable(int n_max, Rational p) : n_max_(n_max), p_(std::move(p)) {
    if (n_max_ < 0) throw std::domain_error("ValueTable: negative horizon");
    if (sgn(p_) <= 0 || p_ >= 1)
      throw std::domain_error("ValueTable: p must lie in (0,1)");
    build();
  }

  int n_max() const { return n_max_; }
  const Rational& p() const { return p_; }

  /// pi_{k,j}. States with j >= k + 2 are unwinnable and report exactly 0.
  Rational value(int k, int j) const {
    check_k(k);
    if (j < 0) throw std::domain_error("ValueTable::value: negative gap");
    if (j > k + 1) return Rational(0);
    return make_rational(rows_[k][j], den_pow_[k]);
  }

  /// U_k: win probability when stopping with k steps left (gap <= 1).
  Rational stop_value(int k) const {
    check_k(k);
    return make_rational(u_num_[k], den_pow_[k]);
  }

  /// W_k: win probability when continuing from the critical state (k, 1).
  Rational continuation(int k) const {
    check_k(k);
    if (k < 1) throw std::domain_error("ValueTable::continuation: k >= 1 required");
    return make_rational(w_num_[k], den_pow_[k]);
  }

  /// sign(U_k - W_k): + means stopping is strictly better at (k, 1).
  int stop_sign(int k) const {
    check_k(k);
    if (k < 1) throw std::domain_error("ValueTable::stop_sign: k >= 1 required");
    return mpz_cmp(u_num_[k].get_mpz_t(), w_num_[k].get_mpz_t()) > 0
               ? 1
               : (u_num_[k] == w_num_[k] ? 0 : -1);
  }

  /// Policy at the critical state (k, 1); ties stop.
  bool stop_optimal(int k) const { return stop_sign(k) >= 0; }

 private:
  void check_k(int k) const {
    if (k < 0 || k > n_max_)
      throw std::domain_error("ValueTable: layer index out of range");
  }

  void build() {
    Integer a = p_.get_num(), d = p_.get_den(), b = d - a;
    den_pow_.resize(n_max_ + 1);
    den_pow_[0] = 1;
    for (int k = 1; k <= n_max_; ++k) den_pow_[k] = den_pow_[k - 1] * d;
    u_num_ = detail::stop_value_numerators(n_max_, a, d);
    w_num_.assign(n_max_ + 1, Integer(0));
    rows_.resize(n_max_ + 1);
    rows_[0] = {Integer(1), Integer(1)};
    for (int k = 1; k <= n_max_; ++k) {
      const auto& prev = rows_[k - 1];  // indices 0..k
      auto& row = rows_[k];
      row.resize(k + 2);
      auto pv = [&](int j) -> const Integer& {
        static const Integer kZero(0);
        return j < static_cast<int>(prev.size()) ? prev[j] : kZero;
      };
      w_num_[k] = a * prev[0] + b * pv(2);
      row[0] = a * prev[0] + b * prev[1];
      if (row[0] < u_num_[k]) row[0] = u_num_[k];
      row[1] = w_num_[k] < u_num_[k] ? u_num_[k] : w_num_[k];
      for (int j = 2; j <= k + 1; ++j) row[j] = a * pv(j - 1) + b * pv(j + 1);
    }
  }

  int n_max_;
  Rational p_;
  std::vector<std::vector<Integer>> rows_;  // rows_[k][j], j = 0..k+1
  std::vector<Integer> u_num_, w_num_, den_pow_;
};

inline ValueTable build_value_table(int n, const Rational& p) {
  return ValueTable(n, p);
}

/**
 * Shared cache of value tables keyed by exact p. The stored table for a given
 * p only ever grows; callers receive a shared handle so concurrent use is
 * safe after the build completes.
 */
inline std::shared_ptr<const ValueTable> shared_table(int n, const Rational& p) {
  static std::mutex mu;
  static std::map<Rational, std::shared_ptr<const ValueTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end() && it->second->n_max() >= n) return it->second;
  auto table = std::make_shared<const ValueTable>(n, p);
  cache[p] = table;
  return table;
}

/// W_n = p pi_{n-1,0} + q pi_{n-1,2}, via the shared table cache.
inline Rational continue_value(int n, const Rational& p) {
  if (n < 1) throw std::domain_error("continue_value: requires n >= 1");
  return shared_table(n, p)->continuation(n);
}

/**
 * Signs of U_k - W_k for every k = 1..n_max in a single backward pass with
 * rolling layers (O(n) memory, no full table). signs[k] is +1 when stopping
 * at (k, 1) is strictly better, 0 at a tie, -1 when continuing wins.
 * signs[0] is unused and set to 0. This is the bisection oracle workhorse:
 * one pass prices every horizon at once.
 */
inline std::vector<signed char> stop_continue_signs(int n_max, const Rational& p) {
  if (n_max < 1)
    throw std::domain_error("stop_continue_signs: requires n_max >= 1");
  if (sgn(p) <= 0 || p >= 1)
    throw std::domain_error("stop_continue_signs: p must lie in (0,1)");
  Integer a = p.get_num(), d = p.get_den(), b = d - a;
  std::vector<Integer> u = detail::stop_value_numerators(n_max, a, d);
  std::vector<Integer> prev(n_max + 3), cur(n_max + 3);
  prev[0] = 1;
  prev[1] = 1;
  std::vector<signed char> signs(n_max + 1, 0);
  Integer w;
  for (int k = 1; k <= n_max; ++k) {
    // prev holds layer k-1 (valid indices 0..k); stale entries beyond are
    // never read because of the j + 1 <= k guard.
    mpz_mul(w.get_mpz_t(), a.get_mpz_t(), prev[0].get_mpz_t());
    if (2 <= k) mpz_addmul(w.get_mpz_t(), b.get_mpz_t(), prev[2].get_mpz_t());
    int c = mpz_cmp(u[k].get_mpz_t(), w.get_mpz_t());
    signs[k] = static_cast<signed char>(c > 0 ? 1 : (c < 0 ? -1 : 0));
    mpz_mul(cur[0].get_mpz_t(), a.get_mpz_t(), prev[0].get_mpz_t());
    mpz_addmul(cur[0].get_mpz_t(), b.get_mpz_t(), prev[1].get_mpz_t());
    if (cur[0] < u[k]) cur[0] = u[k];
    cur[1] = w < u[k] ? u[k] : w;
    for (int j = 2; j <= k + 1; ++j) {
      mpz_mul(cur[j].get_mpz_t(), a.get_mpz_t(), prev[j - 1].get_mpz_t());
      if (j + 1 <= k)
        mpz_addmul(cur[j].get_mpz_t(), b.get_mpz_t(), prev[j + 1].get_mpz_t());
    }
    std::swap(prev, cur);
  }
  return signs;
}

/**
 * Law of the distance-below-running-peak chain after `steps` steps from state
 * `start`. Kernel: from 0 an up-step stays at 0 (the peak moves with the
 * walk) and a down-step goes to 1; from j >= 1 an up-step goes to j - 1 and a
 * down-step to j + 1. Returned dense: law[j] = P(chain = j), j = 0..start+steps.
 *
 * Started at 1 this is the chain of the quantity (1 v M) - S driving the
 * continuation analysis; started at 0 it is the plain maximum-minus-position
 * chain of a fresh walk.
 */
inline std::vector<Rational> gap_chain_law(int steps, int start, const Rational& p) {
  if (steps < 0) throw std::domain_error("gap_chain_law: negative steps");
  if (start < 0) throw std::domain_error("gap_chain_law: negative start");
  if (sgn(p) < 0 || p > 1)
    throw std::domain_error("gap_chain_law: p must lie in [0,1]");
  Rational q = 1 - p;
  std::vector<Rational> law(start + steps + 1, Rational(0));
  std::vector<Rational> nxt(law.size(), Rational(0));
  law[start] = 1;
  for (int s = 0; s < steps; ++s) {
    for (auto& x : nxt) x = 0;
    for (int j = 0; j <= start + s; ++j) {
      if (sgn(law[j]) == 0) continue;
      if (j == 0) {
        nxt[0] += law[0] * p;
        nxt[1] += law[0] * q;
      } else {
        nxt[j - 1] += law[j] * p;
        nxt[j + 1] += law[j] * q;
      }
    }
    std::swap(law, nxt);
  }
  return law;
}

/**
 * Exact law of 1 v (M_n - S_n) for a fresh walk: the chain above started at 0
 * with the clamp applied at read-out. mass(0) = 0 by construction; only
 * nonzero masses are stored.
 */
struct GapDistribution {
  int n;
  Rational p;
  std::map<int, Rational> mass;

  Rational at(int k) const {
    auto it = mass.find(k);
    return it == mass.end() ? Rational(0) : it->second;
  }
};

inline GapDistribution gap_distribution(int n, const Rational& p) {
  if (n < 0) throw std::domain_error("gap_distribution: negative n");
  auto law = gap_chain_law(n, 0, p);
  GapDistribution g{n, p, {}};
  Rational clamped = law[0];
  if (law.size() > 1) clamped += law[1];
  if (sgn(clamped) != 0) g.mass[1] = clamped;
  for (int j = 2; j < static_cast<int>(law.size()); ++j)
    if (sgn(law[j]) != 0) g.mass[j] = law[j];
  return g;
}

/**
 * Value of the fixed rule "continue blindly until 3 steps remain, then play
 * optimally", from the critical state (n, 1). Equals
 * sum_j P(chain-from-1 after n-3 steps = j) * pi_{3,j}, and never exceeds the
 * optimal continuation value W_n.
 */
inline Rational fixed_policy_value(int n, const Rational& p) {
  if (n < 3) throw std::domain_error("fixed_policy_value: requires n >= 3");
  auto law = gap_chain_law(n - 3, 1, p);
  auto t3 = shared_table(3, p);
  Rational acc(0);
  for (int j = 0; j < static_cast<int>(law.size()); ++j)
    if (sgn(law[j]) != 0) acc += law[j] * t3->value(3, j);
  return acc;
}

/**
 * P(sigma = j) for 2 <= j <= n: the first time (>= 1) the chain-from-1
 * returns to state 1. A first return needs at least two steps, so the j = 1
 * mass is zero and the map starts at j = 2. Absorbed mass is removed, so the
 * entries sum to P(sigma <= n).
 */
inline std::map<int, Rational> sigma_distribution(int n, const Rational& p) {
  if (n < 2) throw std::domain_error("sigma_distribution: requires n >= 2");
  if (sgn(p) < 0 || p > 1)
    throw std::domain_error("sigma_distribution: p must lie in [0,1]");
  Rational q = 1 - p;
  std::vector<Rational> law(n + 2, Rational(0)), nxt(n + 2, Rational(0));
  law[1] = 1;
  std::map<int, Rational> out;
  for (int s = 1; s <= n; ++s) {
    for (auto& x : nxt) x = 0;
    Rational hit(0);
    for (int j = 0; j <= s && j < static_cast<int>(law.size()) - 1; ++j) {
      if (sgn(law[j]) == 0) continue;
      if (j == 0) {
        nxt[0] += law[0] * p;
        hit += law[0] * q;  // 0 -> 1 is a return
      } else {
        if (j - 1 == 1)
          hit += law[j] * p;  // 2 -> 1 is a return
        else
          nxt[j - 1] += law[j] * p;
        nxt[j + 1] += law[j] * q;
      }
    }
    if (s >= 2) out[s] = hit;
    std::swap(law, nxt);
  }
  return out;
}

namespace detail {

inline void check_identity_region(const Rational& p, bool allow_any_p,
                                  const char* who) {
  if (sgn(p) <= 0 || p >= 1)
    throw std::domain_error(std::string(who) + ": p must lie in (0,1)");
  if (!allow_any_p && p > make_rational(47, 100))
    throw std::domain_error(std::string(who) +
                            ": p above the validated region (p <= 0.47); "
                            "pass allow_any_p to override");
}

}  // namespace detail

/**
 * The continuation value reassembled along the first return to distance 1:
 *
 *     W_n = sum_{j=2}^{n} P(sigma = j) U_{n-j} + p^n.
 *
 * Valid where stopping at every later critical state is optimal, i.e. for p
 * below the smallest threshold (just under 0.469). The guard refuses
 * p > 0.47 as a coarse screen unless allow_any_p overrides it. Must equal
 * continue_value(n, p) exactly in the valid region; that exact equality is a
 * tested invariant, not an assumption.
 */
inline Rational w_via_sigma(int n, const Rational& p, bool allow_any_p = false) {
  if (n < 2) throw std::domain_error("w_via_sigma: requires n >= 2");
  detail::check_identity_region(p, allow_any_p, "w_via_sigma");
  auto sigma = sigma_distribution(n, p);
  Rational acc = rpow(p, n);
  for (const auto& [j, mass] : sigma)
    if (sgn(mass) != 0) acc += mass * max_le_one_prob(n - j, p);
  return acc;
}

/// a_j = 1 - (p/q)(1 - p^j); decreasing in j for p < 1/2.
inline Rational identity_coeff(int j, const Rational& p) {
  if (j < 0) throw std::domain_error("identity_coeff: negative index");
  if (p >= 1) throw std::domain_error("identity_coeff: requires p < 1");
  Rational q = 1 - p;
  return 1 - (p / q) * (1 - rpow(p, j));
}

/**
 * The first-passage form of the stop-minus-continue difference:
 *
 *     U_n - W_n = a_n - sum_{i=1}^{n-1} a_{n-i} P(tau_1 = i),
 *
 * with a_j = identity_coeff(j, p). Same validity region and override as
 * w_via_sigma; equals U_n - continue_value(n, p) exactly in the region.
 */
inline Rational u_minus_w_identity(int n, const Rational& p,
                                   bool allow_any_p = false) {
  if (n < 1) throw std::domain_error("u_minus_w_identity: requires n >= 1");
  detail::check_identity_region(p, allow_any_p, "u_minus_w_identity");
  Rational acc = identity_coeff(n, p);
  for (int i = 1; i <= n - 1; i += 2)
    acc -= identity_coeff(n - i, p) * first_passage_prob(i, p);
  return acc;
}

}  // namespace neartop
