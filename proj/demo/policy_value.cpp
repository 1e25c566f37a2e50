// Usage sample: exact win probabilities under three rules at p = 23/50,
// the law of the clamped distance from the maximum, and a Monte Carlo run
// checked against the exact value.

#include <iomanip>
#include <iostream>

#include "neartop/dp.hpp"
#include "neartop/rational.hpp"
#include "neartop/simulate.hpp"

int main() {
  using neartop::make_rational;
  using neartop::Rational;
  Rational p = make_rational(23, 50);

  std::cout << "p = " << neartop::to_string(p) << "\n\n";
  std::cout << "n   stop now   fixed rule   optimal\n";
  for (int n = 3; n <= 10; ++n) {
    Rational stop_now = neartop::max_le_one_prob(n, p);
    Rational fixed = neartop::fixed_policy_value(n, p);
    Rational best = neartop::shared_table(n, p)->value(n, 0);
    std::cout << n << (n < 10 ? "   " : "  ") << std::setprecision(6)
              << std::fixed << neartop::to_double(stop_now) << "   "
              << neartop::to_double(fixed) << "     "
              << neartop::to_double(best) << "\n";
  }

  auto law = neartop::gap_distribution(8, p);
  std::cout << "\ndistance from the maximum after 8 steps (clamped at 1):\n";
  for (const auto& [k, mass] : law.mass)
    if (neartop::sgn(mass) > 0)
      std::cout << "  " << k << ": " << neartop::to_string(mass) << "\n";

  neartop::SimConfig cfg;
  cfg.horizon = 8;
  cfg.p = p;
  cfg.trials = 200000;
  cfg.seed = 11;
  auto res = neartop::simulate(cfg);
  std::cout << "\nsimulated optimal play, " << cfg.trials
            << " trials: " << res.estimate << "\n";
  std::cout << "exact win probability:      "
            << neartop::to_double(*res.exact) << "\n";
  return 0;
}
