// Monte Carlo layer: policy parsing, stop-set resolution against certified
// thresholds, exact reference values, and determinism of the block scheme.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "neartop/critical.hpp"
#include "neartop/dp.hpp"
#include "neartop/rational.hpp"
#include "neartop/simulate.hpp"

using neartop::make_rational;
using neartop::Policy;
using neartop::Rational;

TEST_CASE("policy names round-trip") {
  for (Policy pol : {Policy::optimal, Policy::stop_never,
                     Policy::stop_always_at_gap1})
    REQUIRE(neartop::parse_policy(neartop::policy_name(pol)) == pol);
  REQUIRE_THROWS_AS(neartop::parse_policy("always"), std::domain_error);
}

TEST_CASE("stop-set resolution against a threshold table") {
  auto records = neartop::critical_table(8, make_rational(1, 10000000));

  SECTION("small p stops everywhere") {
    auto stop = neartop::resolve_stop_set(records, make_rational(3, 10), 8);
    REQUIRE(stop.size() == 9);
    for (int k = 1; k <= 8; ++k) REQUIRE(stop[k] == 1);
  }

  SECTION("p = 1/2 stops only in the last three steps") {
    auto stop = neartop::resolve_stop_set(records, make_rational(1, 2), 8);
    for (int k = 1; k <= 3; ++k) REQUIRE(stop[k] == 1);
    for (int k = 4; k <= 8; ++k) REQUIRE(stop[k] == 0);
  }

  SECTION("p inside a bracket is refused, naming the step") {
    const auto& r4 = records[3];
    REQUIRE(!r4.exact.has_value());
    Rational mid = (r4.bracket.lo + r4.bracket.hi) / 2;
    bool caught = false;
    try {
      neartop::resolve_stop_set(records, mid, 8);
    } catch (const neartop::ambiguous_policy_error& e) {
      caught = true;
      REQUIRE(e.n() == 4);
    }
    REQUIRE(caught);
  }

  SECTION("records must reach the horizon") {
    REQUIRE_THROWS_AS(
        neartop::resolve_stop_set(records, make_rational(3, 10), 9),
        std::domain_error);
  }
}

TEST_CASE("exact references at the degenerate walk probabilities") {
  Rational zero(0), one(1);
  REQUIRE(neartop::optimal_reference(10, zero) == one);
  REQUIRE(neartop::optimal_reference(10, one) == one);
  REQUIRE(neartop::stop_always_reference(10, zero) == one);
  REQUIRE(neartop::stop_always_reference(10, one) == one);
  // Never stopping loses when the walk only goes down, wins when it only
  // goes up (the endpoint then is the running maximum).
  REQUIRE(neartop::stop_never_reference(10, zero) == Rational(0));
  REQUIRE(neartop::stop_never_reference(10, one) == one);
}

TEST_CASE("optimal reference dominates both fixed rules") {
  for (int n : {5, 10})
    for (const Rational& p :
         {make_rational(3, 10), make_rational(1, 2), make_rational(7, 10)}) {
      Rational v = neartop::optimal_reference(n, p);
      REQUIRE(v >= neartop::stop_never_reference(n, p));
      REQUIRE(v >= neartop::stop_always_reference(n, p));
    }
}

TEST_CASE("degenerate probabilities give exact Monte Carlo answers") {
  auto records = neartop::critical_table(10, make_rational(1, 10000000));
  neartop::SimConfig cfg;
  cfg.horizon = 10;
  cfg.trials = 1000;
  cfg.seed = 1;

  cfg.p = Rational(0);
  for (Policy pol : {Policy::optimal, Policy::stop_always_at_gap1}) {
    cfg.policy = pol;
    auto res = neartop::simulate(cfg, &records);
    REQUIRE(res.wins == res.trials);
    REQUIRE(res.estimate == 1.0);
    REQUIRE(res.std_error == 0.0);
    REQUIRE(res.exact.has_value());
    REQUIRE(*res.exact == Rational(1));
  }
  cfg.policy = Policy::stop_never;
  auto res0 = neartop::simulate(cfg, &records);
  REQUIRE(res0.wins == 0);
  REQUIRE(*res0.exact == Rational(0));

  cfg.p = Rational(1);
  for (Policy pol : {Policy::optimal, Policy::stop_never,
                     Policy::stop_always_at_gap1}) {
    cfg.policy = pol;
    auto res = neartop::simulate(cfg, &records);
    REQUIRE(res.wins == res.trials);
    REQUIRE(*res.exact == Rational(1));
  }
}

TEST_CASE("simulation rejects unusable configurations") {
  neartop::SimConfig cfg;
  cfg.trials = 0;
  REQUIRE_THROWS_AS(neartop::simulate(cfg), std::domain_error);
  cfg.trials = 10;
  cfg.horizon = 0;
  REQUIRE_THROWS_AS(neartop::simulate(cfg), std::domain_error);
  cfg.horizon = 5;
  cfg.p = make_rational(3, 2);
  REQUIRE_THROWS_AS(neartop::simulate(cfg), std::domain_error);

  // A p strictly inside a bracket cannot be resolved into a stop set.
  auto records = neartop::critical_table(5, make_rational(1, 1000));
  cfg.p = (records[3].bracket.lo + records[3].bracket.hi) / 2;
  cfg.policy = Policy::optimal;
  REQUIRE_THROWS_AS(neartop::simulate(cfg, &records),
                    neartop::ambiguous_policy_error);
}

TEST_CASE("block scheme is deterministic in seed, not thread count") {
  auto records = neartop::critical_table(10, make_rational(1, 10000000));
  neartop::SimConfig cfg;
  cfg.horizon = 10;
  cfg.p = make_rational(1, 2);
  cfg.trials = 150000;  // three blocks, last one partial
  cfg.seed = 42;

  auto r1 = neartop::simulate(cfg, &records);
  auto r2 = neartop::simulate(cfg, &records);
  REQUIRE(r1.wins == r2.wins);

  cfg.threads = 3;
  auto r3 = neartop::simulate(cfg, &records);
  REQUIRE(r3.wins == r1.wins);

  cfg.threads = 1;
  cfg.seed = 43;
  auto r4 = neartop::simulate(cfg, &records);
  REQUIRE(r4.wins != r1.wins);

  REQUIRE(r1.trials == cfg.trials);
  REQUIRE(r1.estimate ==
          static_cast<double>(r1.wins) / static_cast<double>(r1.trials));
}

TEST_CASE("estimates calibrate against the exact values") {
  auto records = neartop::critical_table(10, make_rational(1, 10000000));
  neartop::SimConfig cfg;
  cfg.horizon = 10;
  cfg.trials = 200000;
  cfg.seed = 7;

  for (Policy pol : {Policy::optimal, Policy::stop_never,
                     Policy::stop_always_at_gap1}) {
    for (const Rational& p : {make_rational(3, 10), make_rational(1, 2)}) {
      cfg.policy = pol;
      cfg.p = p;
      auto res = neartop::simulate(cfg, &records);
      REQUIRE(res.exact.has_value());
      double exact = neartop::to_double(*res.exact);
      double sigma = std::sqrt(exact * (1.0 - exact) /
                               static_cast<double>(cfg.trials));
      REQUIRE(std::abs(res.estimate - exact) <= 5.0 * sigma + 1e-12);
    }
  }
}
