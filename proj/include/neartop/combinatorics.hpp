#pragma once

#include <stdexcept>

#include "neartop/rational.hpp"

/**
 * Exact combinatorial building blocks for the walk-near-its-maximum problem:
 * binomial coefficients, the Catalan-type constants t_m, the central binomial
 * differences d_{m,j}, the joint law of (running maximum, endpoint), the
 * stop-value probability U_n = P(M_n <= 1), and first-passage probabilities
 * of the level +1.
 *
 * Everything here is a pure function over exact rationals. No floating point:
 * downstream sign decisions (bisection oracles, ordering proofs) depend on
 * these values being exact.
 */
namespace neartop {

/**
 * C(n, k) with the out-of-range convention C(n, k) = 0 for k < 0 or k > n.
 * The boundary convention is load-bearing: the closed-form walk distributions
 * below index binomials past their support and rely on the zero.
 *
 * @throws std::domain_error if n < 0.
 */
inline Integer binomial(long n, long k) {
  if (n < 0) throw std::domain_error("binomial: negative n");
  if (k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

/**
 * The constant t_m = (1/m) C(2m-2, m-1), m >= 1. Integer-valued for every m
 * (it is the (m-1)-st Catalan number); returned as a Rational because it
 * enters rational expressions directly.
 *
 * @throws std::domain_error if m < 1.
 */
inline Rational catalan_t(long m) {
  if (m < 1) throw std::domain_error("catalan_t: requires m >= 1");
  Integer b = binomial(2 * m - 2, m - 1);
  Integer t;
  // C(2m-2, m-1) is divisible by m; divexact documents the invariant.
  mpz_divexact_ui(t.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(m));
  return Rational(t);
}

/**
 * d_{m,j} = C(2m, m+j) - C(2m, m+j+1), m >= 1, j >= 0. Nonnegative for all
 * valid arguments (central binomials decrease away from the center).
 *
 * @throws std::domain_error if m < 1 or j < 0.
 */
inline Integer d_coeff(long m, long j) {
  if (m < 1) throw std::domain_error("d_coeff: requires m >= 1");
  if (j < 0) throw std::domain_error("d_coeff: requires j >= 0");
  return binomial(2 * m, m + j) - binomial(2 * m, m + j + 1);
}

/**
 * a_{n,k,l} = C(n, (n+2k-l)/2) - C(n, (n+2k+2-l)/2).
 *
 * Evaluates the raw formula wherever the half-integer arguments are integral;
 * returns 0 when n + l is odd (parity mismatch: no length-n path ends at l).
 * Range restrictions such as l <= k are the caller's concern (see
 * joint_max_end_prob); this function is the bare coefficient.
 *
 * @throws std::domain_error if n < 0 or k < 0.
 */
inline Integer a_coeff(long n, long k, long l) {
  if (n < 0) throw std::domain_error("a_coeff: negative n");
  if (k < 0) throw std::domain_error("a_coeff: negative k");
  if (((n + l) % 2 + 2) % 2 != 0) return 0;
  return binomial(n, (n + 2 * k - l) / 2) - binomial(n, (n + 2 * k + 2 - l) / 2);
}

/**
 * P(M_n = k, S_n = l) for the walk with up-probability p: the joint law of the
 * running maximum and the endpoint,
 *
 *     P(M_n = k, S_n = l) = a_{n,k,l} p^{(n+l)/2} q^{(n-l)/2}.
 *
 * Outside the support (parity mismatch, l > k, k > n, or k < 0) the result is
 * exactly 0, so summing over all (k, l) without caller-side filtering yields
 * total mass 1.
 *
 * @throws std::domain_error if p is outside (0, 1) or n < 0.
 */
inline Rational joint_max_end_prob(long n, long k, long l, const Rational& p) {
  if (sgn(p) <= 0 || p >= 1)
    throw std::domain_error("joint_max_end_prob: p must lie in (0,1)");
  if (n < 0) throw std::domain_error("joint_max_end_prob: negative n");
  if (k < 0 || k > n || l > k) return Rational(0);
  if (((n + l) % 2 + 2) % 2 != 0) return Rational(0);
  Integer a = a_coeff(n, k, l);
  if (sgn(a) == 0) return Rational(0);
  Rational q = 1 - p;
  return Rational(a) * rpow(p, static_cast<unsigned long>((n + l) / 2)) *
         rpow(q, static_cast<unsigned long>((n - l) / 2));
}

/**
 * U_n = P(M_n <= 1): the win probability when stopping immediately with the
 * full n-step future still to run. Even/odd pairing U_{2t} = U_{2t+1} and
 *
 *     U_{2t} = 1 - sum_{j=1}^{t} t_{j+1} p^{j+1} q^{j-1},
 *
 * with U_0 = U_1 = 1. Defined for p in [0, 1] (the series degenerates
 * correctly at the endpoints).
 *
 * @throws std::domain_error if p is outside [0, 1] or n < 0.
 */
inline Rational max_le_one_prob(long n, const Rational& p) {
  if (sgn(p) < 0 || p > 1)
    throw std::domain_error("max_le_one_prob: p must lie in [0,1]");
  if (n < 0) throw std::domain_error("max_le_one_prob: negative n");
  long t = n / 2;
  Rational q = 1 - p;
  Rational acc(0);
  for (long j = 1; j <= t; ++j) {
    acc += catalan_t(j + 1) * rpow(p, j + 1) * rpow(q, j - 1);
  }
  return 1 - acc;
}

/**
 * P(tau_1 = i): first passage of the walk to level +1 at time i. Zero for even
 * i; for i = 2j+1,
 *
 *     P(tau_1 = 2j+1) = (1/(j+1)) C(2j, j) p^{j+1} q^j.
 *
 * @throws std::domain_error if i < 1 or p outside [0, 1].
 */
inline Rational first_passage_prob(long i, const Rational& p) {
  if (i < 1) throw std::domain_error("first_passage_prob: requires i >= 1");
  if (sgn(p) < 0 || p > 1)
    throw std::domain_error("first_passage_prob: p must lie in [0,1]");
  if (i % 2 == 0) return Rational(0);
  long j = (i - 1) / 2;
  Integer c = binomial(2 * j, j);
  Integer coeff;
  mpz_divexact_ui(coeff.get_mpz_t(), c.get_mpz_t(),
                  static_cast<unsigned long>(j + 1));
  Rational q = 1 - p;
  return Rational(coeff) * rpow(p, j + 1) * rpow(q, j);
}

/**
 * P(tau_1 > n) = 1 - sum_{i <= n} P(tau_1 = i). The tail of the first-passage
 * law; for p < 1/2 the full series sums to p/q < 1, so the tail stays bounded
 * away from zero.
 */
inline Rational tau_exceeds_prob(long n, const Rational& p) {
  if (n < 0) throw std::domain_error("tau_exceeds_prob: negative n");
  Rational acc(0);
  for (long i = 1; i <= n; i += 2) acc += first_passage_prob(i, p);
  return 1 - acc;
}

}  // namespace neartop
