#include "neartop/dp.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "neartop/combinatorics.hpp"
#include "neartop/rational.hpp"
#include "path_enum.hpp"

using neartop::Rational;
using neartop::make_rational;

namespace {

const std::vector<Rational>& probe_ps() {
  static const std::vector<Rational> ps = {
      make_rational(1, 10), make_rational(3, 10), make_rational(2, 5),
      make_rational(23, 50)};
  return ps;
}

}  // namespace

TEST_CASE("value table terminal layer and closed third layer") {
  Rational p = make_rational(2, 7);
  Rational q = 1 - p;
  auto table = neartop::build_value_table(3, p);
  CHECK(table.value(0, 1) == 1);
  CHECK(table.value(0, 0) == 1);
  CHECK(table.value(0, 2) == 0);
  CHECK(table.value(3, 2) == 3 * p * p * q + p * q * q);
  CHECK(table.value(3, 4) == p * p * p);
  CHECK(table.value(3, 5) == 0);
  CHECK_THROWS_AS(neartop::build_value_table(3, Rational(1)),
                  std::domain_error);
}

TEST_CASE("gap-1 value is the larger of stopping and continuing") {
  for (const Rational& p : probe_ps()) {
    auto table = neartop::shared_table(25, p);
    for (int k = 1; k <= 25; ++k) {
      Rational u = neartop::max_le_one_prob(k, p);
      Rational w = table->continuation(k);
      REQUIRE(table->value(k, 1) == (u > w ? u : w));
      // Unwinnable states stay at exactly zero.
      REQUIRE(table->value(k, k + 2) == 0);
      REQUIRE(table->value(k, k + 5) == 0);
    }
  }
}

TEST_CASE("continuing weakly dominates stopping at gap zero") {
  for (const Rational& p : probe_ps()) {
    auto table = neartop::shared_table(25, p);
    for (int k = 1; k <= 25; ++k) {
      Rational cont =
          p * table->value(k - 1, 0) + (1 - p) * table->value(k - 1, 1);
      REQUIRE(table->value(k, 0) == cont);
      REQUIRE(cont >= table->stop_value(k));
    }
  }
}

TEST_CASE("stop value is nonincreasing in the horizon") {
  for (const Rational& p : probe_ps())
    for (int n = 1; n <= 30; ++n)
      REQUIRE(neartop::max_le_one_prob(n, p) <=
              neartop::max_le_one_prob(n - 1, p));
}

TEST_CASE("fixed rule never beats the continuation or optimal values") {
  for (const Rational& p : probe_ps()) {
    auto table = neartop::shared_table(25, p);
    // At the base horizon the fixed rule IS the optimal three-step policy,
    // so it dominates plain continuation there; from n = 4 on it is one
    // admissible way to continue and sits below the optimal continuation.
    REQUIRE(neartop::fixed_policy_value(3, p) == table->value(3, 1));
    REQUIRE(neartop::fixed_policy_value(4, p) == table->continuation(4));
    for (int n = 4; n <= 25; ++n) {
      Rational vt = neartop::fixed_policy_value(n, p);
      Rational w = table->continuation(n);
      REQUIRE(vt <= w);
      REQUIRE(w <= table->value(n, 1));
    }
  }
}

TEST_CASE("integer sign vector agrees with the rational table") {
  for (const Rational& p : {make_rational(3, 10), make_rational(47, 100),
                            make_rational(499, 1000)}) {
    auto signs = neartop::stop_continue_signs(20, p);
    auto table = neartop::shared_table(20, p);
    for (int k = 1; k <= 20; ++k) REQUIRE(signs[k] == table->stop_sign(k));
  }
}

TEST_CASE("continue_value special cases") {
  Rational p = make_rational(2, 7);
  CHECK(neartop::continue_value(1, p) == p);
  // At p = 1/2 = p_3 continuing is (weakly) optimal with 3 steps left.
  Rational half = make_rational(1, 2);
  auto t3 = neartop::shared_table(3, half);
  CHECK(neartop::continue_value(3, half) == t3->value(3, 1));
  // Just above the 4-step threshold continuing is strictly better.
  Rational p469 = make_rational(469, 1000);
  CHECK(neartop::continue_value(4, p469) > neartop::max_le_one_prob(4, p469));
}

TEST_CASE("clamped gap law matches path enumeration") {
  Rational p = make_rational(2, 7);
  auto g0 = neartop::gap_distribution(0, p);
  CHECK(g0.at(1) == 1);
  auto g1 = neartop::gap_distribution(1, p);
  CHECK(g1.at(1) == 1);

  for (Rational pr : {make_rational(1, 4), make_rational(1, 2),
                      make_rational(7, 10)}) {
    for (int n = 0; n <= 12; ++n) {
      auto dist = neartop::gap_distribution(n, pr);
      auto oracle = pathenum::enumerate(n, pr);
      Rational total(0);
      CHECK(dist.at(0) == 0);
      for (int k = 1; k <= n + 1; ++k) {
        auto it = oracle.clamped_gap.find(k);
        Rational want = it == oracle.clamped_gap.end() ? Rational(0) : it->second;
        REQUIRE(dist.at(k) == want);
        total += dist.at(k);
      }
      REQUIRE(total == 1);
    }
  }
}

TEST_CASE("fixed rule value reduces to the third layer") {
  Rational p = make_rational(2, 7);
  CHECK(neartop::fixed_policy_value(3, p) == 1 - p * p);
  CHECK_THROWS_AS(neartop::fixed_policy_value(2, p), std::domain_error);
  Rational p46 = make_rational(23, 50);
  CHECK(neartop::fixed_policy_value(5, p46) <= neartop::continue_value(5, p46));
}

TEST_CASE("return time law matches path enumeration") {
  for (Rational p : {make_rational(1, 4), make_rational(1, 2),
                     make_rational(7, 10)}) {
    for (int n = 2; n <= 12; ++n) {
      auto law = neartop::sigma_distribution(n, p);
      auto oracle = pathenum::sigma_tally(n, p);
      CHECK(law.count(1) == 0);
      Rational total(0);
      for (const auto& [s, mass] : law) {
        auto it = oracle.find(s);
        Rational want = it == oracle.end() ? Rational(0) : it->second;
        REQUIRE(mass == want);
        total += mass;
      }
      REQUIRE(total <= 1);
    }
  }
  Rational p = make_rational(2, 5);
  auto law = neartop::sigma_distribution(6, p);
  CHECK(law.at(2) == 2 * p * (1 - p));
}

TEST_CASE("sigma series reassembles the continuation value") {
  Rational p = make_rational(2, 5);
  // Two-step case: the only return is sigma = 2, plus the all-up run.
  auto law2 = neartop::sigma_distribution(2, p);
  CHECK(neartop::w_via_sigma(2, p) == law2.at(2) + p * p);

  CHECK(neartop::w_via_sigma(6, p) == neartop::continue_value(6, p));
  CHECK(neartop::w_via_sigma(10, p) == neartop::continue_value(10, p));
  Rational p46 = make_rational(46, 100);
  CHECK(neartop::w_via_sigma(27, p46) == neartop::continue_value(27, p46));

  for (const Rational& pr : probe_ps())
    for (int n = 2; n <= 30; ++n)
      REQUIRE(neartop::w_via_sigma(n, pr) == neartop::continue_value(n, pr));
}

TEST_CASE("first passage identity for the stop-continue difference") {
  Rational p = make_rational(2, 5);
  CHECK(neartop::identity_coeff(1, p) == 1 - p);
  CHECK(neartop::u_minus_w_identity(10, p) ==
        neartop::max_le_one_prob(10, p) - neartop::continue_value(10, p));

  Rational p46 = make_rational(23, 50);
  CHECK(neartop::identity_coeff(3, p46) <= neartop::identity_coeff(2, p46));
  CHECK(neartop::identity_coeff(2, p46) <= neartop::identity_coeff(1, p46));

  for (const Rational& pr : probe_ps())
    for (int n = 1; n <= 30; ++n)
      REQUIRE(neartop::u_minus_w_identity(n, pr) ==
              neartop::max_le_one_prob(n, pr) - neartop::continue_value(n, pr));
}

TEST_CASE("identity guard refuses p beyond the screened region") {
  Rational high = make_rational(48, 100);
  CHECK_THROWS_AS(neartop::w_via_sigma(6, high), std::domain_error);
  CHECK_THROWS_AS(neartop::u_minus_w_identity(6, high), std::domain_error);
  CHECK_NOTHROW(neartop::w_via_sigma(6, high, true));
  CHECK_NOTHROW(neartop::u_minus_w_identity(6, high, true));
  // The guard boundary itself is allowed.
  CHECK_NOTHROW(neartop::w_via_sigma(6, make_rational(47, 100)));
}
