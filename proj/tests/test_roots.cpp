#include "neartop/roots.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "neartop/inequalities.hpp"
#include "neartop/polynomial.hpp"
#include "neartop/rational.hpp"

using neartop::Bracket;
using neartop::Rational;
using neartop::UniPoly;
using neartop::make_rational;

TEST_CASE("isolate_root bisects to the requested width") {
  neartop::SignOracle oracle = [](const Rational& x) {
    return neartop::sgn(x - make_rational(1, 2));
  };
  Bracket b = neartop::isolate_root(oracle, {Rational(0), Rational(1)},
                                    make_rational(1, 1 << 20));
  // First dyadic probe of [0,1] lands exactly on the root.
  CHECK(b.degenerate());
  CHECK(b.lo == make_rational(1, 2));

  Bracket c = neartop::isolate_root(oracle, {Rational(0), make_rational(9, 10)},
                                    make_rational(1, 1 << 20));
  CHECK(c.lo <= make_rational(1, 2));
  CHECK(make_rational(1, 2) <= c.hi);
  CHECK(c.width() <= make_rational(1, 1 << 20));
}

TEST_CASE("isolate_root accepts either orientation and rejects no change") {
  // Decreasing through the root: + at lo, - at hi.
  neartop::SignOracle falling = [](const Rational& x) {
    return neartop::sgn(make_rational(1, 3) - x);
  };
  Bracket b = neartop::isolate_root(falling, {Rational(0), Rational(1)},
                                    make_rational(1, 1000000));
  CHECK(b.lo <= make_rational(1, 3));
  CHECK(make_rational(1, 3) <= b.hi);

  neartop::SignOracle flat = [](const Rational&) { return 1; };
  CHECK_THROWS_AS(neartop::isolate_root(flat, {Rational(0), Rational(1)},
                                        make_rational(1, 1024)),
                  neartop::bracket_error);
}

TEST_CASE("root_count_bound honors count and parity guarantees") {
  // (p - 1/4)(p - 3/4): two roots in (0,1), one in (0,1/2), none in between.
  UniPoly f = UniPoly({make_rational(3, 16), Rational(-1), Rational(1)});
  int whole = neartop::root_count_bound(f, Rational(0), Rational(1));
  CHECK(whole >= 2);
  CHECK(whole % 2 == 0);
  int left = neartop::root_count_bound(f, Rational(0), make_rational(1, 2));
  CHECK(left >= 1);
  CHECK(left % 2 == 1);
  int gap = neartop::root_count_bound(f, make_rational(26, 100),
                                      make_rational(49, 100));
  CHECK(gap % 2 == 0);
}

TEST_CASE("minimize_on_interval encloses simple minima") {
  UniPoly sq = UniPoly::monomial(1, 2);
  auto res = neartop::minimize_on_interval(sq, Rational(-1), Rational(1),
                                           make_rational(1, 10000000));
  CHECK(res.lower <= 0);
  CHECK(0 <= res.upper);
  CHECK(res.upper - res.lower <= make_rational(1, 10000000));
  CHECK(res.argmin.lo <= 0);
  CHECK(0 <= res.argmin.hi);
}

TEST_CASE("minimize_on_interval reproduces quoted coefficient minima") {
  auto sysb = neartop::b_system(neartop::Suite::b);
  auto res = neartop::minimize_on_interval(sysb.coeff.at(1), sysb.p_lo,
                                           sysb.p_hi, make_rational(1, 10000000));
  CHECK(res.lower <= make_rational(-3, 8));
  CHECK(make_rational(-3, 8) <= res.upper);

  auto sysc = neartop::b_system(neartop::Suite::c);
  auto resc = neartop::minimize_on_interval(sysc.coeff.at(1), sysc.p_lo,
                                            sysc.p_hi, make_rational(1, 10000000));
  CHECK(resc.lower <= make_rational(-47, 4));
  CHECK(make_rational(-47, 4) <= resc.upper);

  // Sanity cross-check: the certified lower bound sits below every grid sample.
  for (const auto& [sys, res2] :
       {std::pair{sysb, res}, std::pair{sysc, resc}}) {
    const UniPoly& f = sys.coeff.at(1);
    for (int k = 0; k <= 1000; ++k) {
      Rational x = sys.p_lo + (sys.p_hi - sys.p_lo) * Rational(k) / 1000;
      REQUIRE(res2.lower <= f(x));
    }
  }
}
