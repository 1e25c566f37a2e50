#pragma once

#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "neartop/dp.hpp"
#include "neartop/rational.hpp"
#include "neartop/roots.hpp"

namespace neartop {

/*
 * Critical probabilities p_n: the threshold at which the optimal policy at
 * the decision state (n, 1) switches from stop (p <= p_n) to continue.
 * p_1 = 1 and p_2 = p_3 = 1/2 hold exactly; for n >= 4 the threshold is the
 * sign change of U_n - W_n inside (2/5, 1/2) and is isolated by dyadic
 * bisection of the exact integer sign oracle. Ordering claims about the
 * sequence are decided from bracket intervals only, never from truncated
 * decimals.
 */

/**
 * Cache of stop_continue_signs vectors keyed by exact p. One backward pass
 * prices every horizon up to its length, so all bisections at a shared probe
 * point reuse a single pass. Queries are counted so callers can budget work.
 */
class SignCache {
 public:
  /// sign(U_n - W_n) at p. Extends the cached vector for p when too short.
  int sign(int n, const Rational& p) {
    if (n < 1) throw std::domain_error("SignCache::sign: requires n >= 1");
    std::lock_guard<std::mutex> lock(mu_);
    ++queries_;
    auto it = vectors_.find(p);
    if (it == vectors_.end() || static_cast<int>(it->second.size()) <= n) {
      ++passes_;
      vectors_[p] = stop_continue_signs(n, p);
      it = vectors_.find(p);
    }
    return it->second[n];
  }

  long long queries() const { return queries_.load(); }
  long long passes() const { return passes_.load(); }

 private:
  std::mutex mu_;
  std::map<Rational, std::vector<signed char>> vectors_;
  std::atomic<long long> queries_{0};
  std::atomic<long long> passes_{0};
};

struct CriticalValueRecord {
  int n = 0;
  /// Set when the threshold is known exactly (n <= 3, or a probe hit it).
  std::optional<Rational> exact;
  /// Encloses p_n; sign is + at lo and - at hi; degenerate [v, v] when exact.
  Bracket bracket{Rational(0), Rational(0)};
  /// First six decimal digits, truncated; certified by bracket agreement.
  std::string decimal6;
  /// Sign-oracle queries spent on this record so far.
  long long oracle_evals = 0;
};

namespace detail {

inline SignCache& fallback_cache() {
  static SignCache cache;
  return cache;
}

/// Shrinks the record's bracket to the given width; endpoints keep signs +/-.
inline void refine_record(CriticalValueRecord& rec, const Rational& width,
                          SignCache& cache) {
  if (rec.exact || rec.bracket.width() <= width) return;
  SignOracle oracle = [&](const Rational& x) {
    ++rec.oracle_evals;
    return cache.sign(rec.n, x);
  };
  rec.bracket = isolate_root(oracle, rec.bracket, width, +1, -1);
  if (rec.bracket.degenerate()) rec.exact = rec.bracket.lo;
  // A nested bracket of a decimal6-certified one keeps the same truncation.
}

}  // namespace detail

/**
 * Isolates p_n to the requested bracket width, then tightens (16x per round)
 * until the six-digit truncations of both endpoints agree, so decimal6 is a
 * certified truncation of p_n itself. Throws bracket_error when the sign
 * structure at the (widened) initial bracket is not the expected +/-.
 */
inline CriticalValueRecord critical_value(int n, const Rational& width_target,
                                          SignCache* cache = nullptr) {
  if (n < 1) throw std::domain_error("critical_value: requires n >= 1");
  if (sgn(width_target) <= 0)
    throw std::domain_error("critical_value: width target must be positive");
  CriticalValueRecord rec;
  rec.n = n;
  if (n <= 3) {
    Rational v = n == 1 ? Rational(1) : make_rational(1, 2);
    rec.exact = v;
    rec.bracket = Bracket{v, v};
    rec.decimal6 = truncate_decimal(v, 6);
    return rec;
  }
  SignCache& c = cache ? *cache : detail::fallback_cache();
  SignOracle oracle = [&](const Rational& x) {
    ++rec.oracle_evals;
    return c.sign(n, x);
  };
  Bracket initial{make_rational(2, 5), make_rational(1, 2)};
  try {
    rec.bracket = isolate_root(oracle, initial, width_target);
  } catch (const bracket_error&) {
    Bracket wide{make_rational(1, 100), make_rational(1, 2)};
    rec.bracket = isolate_root(oracle, wide, width_target);
  }
  if (rec.bracket.degenerate()) rec.exact = rec.bracket.lo;
  Rational width = width_target;
  while (!rec.exact && truncate_decimal(rec.bracket.lo, 6) !=
                           truncate_decimal(rec.bracket.hi, 6)) {
    width /= 16;
    detail::refine_record(rec, width, c);
  }
  rec.decimal6 = truncate_decimal(rec.bracket.lo, 6);
  return rec;
}

/**
 * Records for n = 1..n_max. Work runs from the largest n down so that the
 * early passes populate the sign cache for every smaller horizon at the
 * shared probe points. With threads > 1 the horizons are distributed over a
 * small pool; per-record results are identical either way.
 */
inline std::vector<CriticalValueRecord> critical_table(
    int n_max, const Rational& width_target, int threads = 1,
    SignCache* cache = nullptr) {
  if (n_max < 1) throw std::domain_error("critical_table: requires n_max >= 1");
  SignCache& c = cache ? *cache : detail::fallback_cache();
  std::vector<CriticalValueRecord> out(n_max);
  if (threads <= 1) {
    for (int n = n_max; n >= 1; --n) out[n - 1] = critical_value(n, width_target, &c);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  int workers = std::min(threads, n_max);
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n_max) return;
        int n = n_max - i;
        out[n - 1] = critical_value(n, width_target, &c);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

/// One instance of an ordering claim: status is holds | reversed | unresolved.
struct ClaimResult {
  std::string claim;
  std::string detail;
  std::string status;
};

/// Per-family rollup: holds only when every instance in the range holds.
struct ClaimSummary {
  std::string claim;
  std::string range_checked;
  bool holds = false;
  std::optional<int> first_violation;  // first reversed instance parameter
};

struct PatternReport {
  std::vector<ClaimResult> results;    // one row per claim instance
  std::vector<ClaimSummary> claims;    // one row per claim family
  long long oracle_evals = 0;          // total sign queries spent
  bool all_confirmed = false;          // every instance of every family holds
};

struct PatternOptions {
  Rational width_target = make_rational(1, 10000000);
  int tighten_rounds = 8;           // bracket width shrinks 64x per round
  long long work_cap = 50'000'000;  // max total sign queries
  int threads = 1;                  // forwarded to table precomputation
};

/// Inclusive parameter range for one claim family.
struct ClaimRequest {
  std::string id;
  int lo = 0;
  int hi = 0;
};

namespace detail {

/**
 * Interval-rigorous comparison engine over a lazily built record store.
 * a >= b is confirmed when a.lo >= b.hi, refuted when a.hi < b.lo, and
 * otherwise both brackets are tightened and the test retried until the
 * round or work budget runs out.
 */
class PatternScan {
 public:
  PatternScan(const PatternOptions& opts, SignCache& cache)
      : opts_(opts), cache_(cache), start_queries_(cache.queries()) {}

  void seed(const std::vector<CriticalValueRecord>& records) {
    for (const auto& rec : records) records_.emplace(rec.n, rec);
  }

  CriticalValueRecord& record(int n) {
    auto it = records_.find(n);
    if (it != records_.end()) return it->second;
    auto rec = critical_value(n, opts_.width_target, &cache_);
    return records_.emplace(n, std::move(rec)).first->second;
  }

  /// +1 holds, -1 reversed, 0 unresolved (budget or rounds exhausted).
  int compare_ge(int an, int bn) {
    for (int round = 0; round <= opts_.tighten_rounds; ++round) {
      CriticalValueRecord& a = record(an);
      CriticalValueRecord& b = record(bn);
      if (a.bracket.lo >= b.bracket.hi) return +1;
      if (a.bracket.hi < b.bracket.lo) return -1;
      if (exhausted()) return 0;
      Rational w = a.bracket.width();
      if (b.bracket.width() > w) w = b.bracket.width();
      w /= 64;
      refine_record(a, w, cache_);
      refine_record(b, w, cache_);
    }
    return 0;
  }

  bool exhausted() const { return spent() >= opts_.work_cap; }
  long long spent() const { return cache_.queries() - start_queries_; }
  SignCache& cache() { return cache_; }

 private:
  PatternOptions opts_;
  SignCache& cache_;
  std::map<int, CriticalValueRecord> records_;
  long long start_queries_;
};

inline const char* status_name(int s) {
  return s > 0 ? "holds" : (s < 0 ? "reversed" : "unresolved");
}

}  // namespace detail

/**
 * Evaluates ordering claims about the critical probabilities. Supported
 * claim families (parameter ranges are inclusive):
 *
 *   p4-minimal      p_4 < p_n for n in [lo, hi]
 *   odd-ge-shift3   p_{2n+1} >= p_{2n+4} for n in [lo, hi]
 *   odd-ge-shift5   p_{2n+1} >= p_{2n+6} for n in [lo, hi]
 *   odd-pair-chain  p_{2m+1} >= p_{2m-1} and p_{2m-1} >= p_{2m}, m in [lo, hi]
 *   even-increasing p_{2n} <= p_{2n+2} for n in [lo, hi]
 *   shift8-ge-odd   p_{2m+8} >= p_{2m+1} for m in [lo, hi]
 *
 * p4-minimal first tries the shared-probe shortcut: p_4's bracket is pushed
 * below 47/100, and a single sign query per n (all served by one backward
 * pass at p = 47/100) certifies p_n > 47/100 > p_4. Failing that it falls
 * back to bracket comparison. Unknown claim ids throw.
 *
 * `seed` records, when given, are used as the starting brackets; missing
 * horizons are computed on demand at opts.width_target.
 */
inline PatternReport pattern_report(
    const std::vector<ClaimRequest>& claims, const PatternOptions& opts,
    SignCache* cache = nullptr,
    const std::vector<CriticalValueRecord>* seed = nullptr) {
  SignCache& c = cache ? *cache : detail::fallback_cache();
  detail::PatternScan scan(opts, c);
  if (seed) scan.seed(*seed);
  PatternReport report;
  bool all = true;
  ClaimSummary* current = nullptr;
  auto open_family = [&](const ClaimRequest& claim, const char* var) {
    report.claims.push_back(
        {claim.id,
         std::string(var) + "=" + std::to_string(claim.lo) + ".." +
             std::to_string(claim.hi),
         true, std::nullopt});
    current = &report.claims.back();
  };
  auto push = [&](const std::string& id, const std::string& var, int param,
                  int s) {
    report.results.push_back(
        {id, var + "=" + std::to_string(param), detail::status_name(s)});
    if (s <= 0) {
      all = false;
      current->holds = false;
      if (s < 0 && !current->first_violation) current->first_violation = param;
    }
  };
  for (const auto& claim : claims) {
    if (claim.lo > claim.hi)
      throw std::domain_error("pattern_report: empty range for " + claim.id);
    if (claim.id == "p4-minimal") {
      open_family(claim, "n");
      Rational probe = make_rational(47, 100);
      CriticalValueRecord& p4 = scan.record(4);
      for (int round = 0; round <= opts.tighten_rounds &&
                          p4.bracket.hi >= probe && !scan.exhausted();
           ++round)
        detail::refine_record(p4, p4.bracket.width() / 64, c);
      for (int n = claim.lo; n <= claim.hi; ++n) {
        int s = 0;
        if (p4.bracket.hi < probe && !scan.exhausted())
          s = c.sign(n, probe) > 0 ? +1 : 0;
        if (s == 0) s = scan.compare_ge(n, 4);
        push(claim.id, "n", n, s);
      }
    } else if (claim.id == "odd-ge-shift3") {
      open_family(claim, "n");
      for (int n = claim.lo; n <= claim.hi; ++n)
        push(claim.id, "n", n, scan.compare_ge(2 * n + 1, 2 * n + 4));
    } else if (claim.id == "odd-ge-shift5") {
      open_family(claim, "n");
      for (int n = claim.lo; n <= claim.hi; ++n)
        push(claim.id, "n", n, scan.compare_ge(2 * n + 1, 2 * n + 6));
    } else if (claim.id == "odd-pair-chain") {
      open_family(claim, "m");
      for (int m = claim.lo; m <= claim.hi; ++m) {
        if (m < 1)
          throw std::domain_error("pattern_report: odd-pair-chain needs m >= 1");
        int left = scan.compare_ge(2 * m + 1, 2 * m - 1);
        int right = scan.compare_ge(2 * m - 1, 2 * m);
        int s = (left > 0 && right > 0) ? +1 : ((left < 0 || right < 0) ? -1 : 0);
        push(claim.id, "m", m, s);
      }
    } else if (claim.id == "even-increasing") {
      open_family(claim, "n");
      for (int n = claim.lo; n <= claim.hi; ++n)
        push(claim.id, "n", n, scan.compare_ge(2 * n + 2, 2 * n));
    } else if (claim.id == "shift8-ge-odd") {
      open_family(claim, "m");
      for (int m = claim.lo; m <= claim.hi; ++m)
        push(claim.id, "m", m, scan.compare_ge(2 * m + 8, 2 * m + 1));
    } else {
      throw std::domain_error("pattern_report: unknown claim id " + claim.id);
    }
  }
  report.oracle_evals = scan.spent();
  report.all_confirmed = all;
  return report;
}

/**
 * Pattern evaluation over an already-computed contiguous table (records for
 * n = 1..n_max): compares the given brackets as they are, with no extra
 * oracle work, and reports unresolved where they overlap. Claim ranges are
 * the largest that fit inside the table.
 */
inline PatternReport pattern_report(
    const std::vector<CriticalValueRecord>& records) {
  int n_max = static_cast<int>(records.size());
  if (n_max < 10)
    throw std::domain_error("pattern_report: need records for n = 1..10 at least");
  for (int i = 0; i < n_max; ++i)
    if (records[i].n != i + 1)
      throw std::domain_error("pattern_report: records must cover n = 1..n_max in order");
  PatternOptions opts;
  opts.tighten_rounds = 0;
  opts.work_cap = 0;  // compare-only: never spend oracle work
  std::vector<ClaimRequest> claims{
      {"p4-minimal", 5, n_max},
      {"odd-ge-shift3", 0, (n_max - 4) / 2},
      {"odd-ge-shift5", 3, (n_max - 6) / 2},
      {"odd-pair-chain", 4, (n_max - 1) / 2},
      {"even-increasing", 2, (n_max - 2) / 2},
  };
  return pattern_report(claims, opts, nullptr, &records);
}

/// The standing exploration sweep: shift-8 dominance plus the chain and
/// even-index patterns, all up to the given parameter bound.
inline PatternReport explore_patterns(int m_max, const PatternOptions& opts,
                                      SignCache* cache = nullptr) {
  if (m_max < 5) throw std::domain_error("explore_patterns: requires m_max >= 5");
  std::vector<ClaimRequest> claims{
      {"shift8-ge-odd", 5, m_max},
      {"odd-pair-chain", 4, m_max},
      {"even-increasing", 2, m_max},
  };
  return pattern_report(claims, opts, cache);
}

}  // namespace neartop
