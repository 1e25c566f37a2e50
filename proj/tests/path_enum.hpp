#pragma once

// Brute-force oracle: enumerate all 2^n walk paths, multiply step
// probabilities, and tally whatever law a test needs. Independent of every
// production code path on purpose; n stays small enough that 2^n is cheap.

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "neartop/rational.hpp"

namespace pathenum {

using neartop::Rational;
using neartop::rpow;

struct Tallies {
  std::map<std::pair<int, int>, Rational> joint;  // (max, end) -> prob
  std::map<int, Rational> clamped_gap;            // max(1, M - S) -> prob
  std::map<int, Rational> first_hit_up;           // first time S = +1 -> prob
  Rational max_le_one{0};                         // P(M <= 1)
  Rational no_hit_up{0};                          // P(tau_1 > n)
};

inline Tallies enumerate(int n, const Rational& p) {
  Tallies t;
  Rational q = 1 - p;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    int s = 0, m = 0, ups = 0, hit = 0;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1UL) {
        ++s;
        ++ups;
        m = std::max(m, s);
      } else {
        --s;
      }
      if (hit == 0 && s == 1) hit = i + 1;
    }
    Rational prob = rpow(p, ups) * rpow(q, n - ups);
    t.joint[{m, s}] += prob;
    t.clamped_gap[std::max(1, m - s)] += prob;
    if (m <= 1) t.max_le_one += prob;
    if (hit > 0)
      t.first_hit_up[hit] += prob;
    else
      t.no_hit_up += prob;
  }
  return t;
}

// First time the distance chain started at 1 returns to 1 (the chain moves
// down on up-steps, reflects at 0, and climbs on down-steps).
inline std::map<int, Rational> sigma_tally(int n, const Rational& p) {
  std::map<int, Rational> out;
  Rational q = 1 - p;
  for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
    int state = 1, ups = 0, hit = 0;
    for (int i = 0; i < n; ++i) {
      bool up = (mask >> i) & 1UL;
      if (up) {
        ++ups;
        if (state > 0) --state;
      } else {
        ++state;
      }
      if (hit == 0 && state == 1) hit = i + 1;
    }
    if (hit > 0) out[hit] += rpow(p, ups) * rpow(q, n - ups);
  }
  return out;
}

}  // namespace pathenum
