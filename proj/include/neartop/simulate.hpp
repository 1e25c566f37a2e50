#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "neartop/combinatorics.hpp"
#include "neartop/critical.hpp"
#include "neartop/dp.hpp"
#include "neartop/rational.hpp"

namespace neartop {

/*
 * Monte Carlo cross-check of the exact machinery. A trial runs the walk to
 * the horizon; the policy may commit to a stopping time on the way, and a
 * trial that never stops commits at the horizon. The trial wins when the
 * final running maximum exceeds the committed position by at most one.
 * Estimates are compared against exact references computed independently of
 * the sampler, so a disagreement implicates one side, not both.
 */

enum class Policy {
  optimal,            // stop at gap 1 when the threshold table says stop
  stop_never,         // always run to the horizon
  stop_always_at_gap1  // commit at the first time the gap hits 1
};

inline const char* policy_name(Policy p) {
  switch (p) {
    case Policy::optimal: return "optimal";
    case Policy::stop_never: return "stop-never";
    default: return "stop-always-at-gap1";
  }
}

inline Policy parse_policy(const std::string& s) {
  if (s == "optimal") return Policy::optimal;
  if (s == "stop-never") return Policy::stop_never;
  if (s == "stop-always-at-gap1") return Policy::stop_always_at_gap1;
  throw std::domain_error("unknown policy: " + s);
}

/// Raised when p falls strictly inside a threshold bracket, so the optimal
/// action at that state is not determined by the table at its current width.
class ambiguous_policy_error : public std::runtime_error {
 public:
  ambiguous_policy_error(int n, const Bracket& b)
      : std::runtime_error(
            "optimal action at horizon " + std::to_string(n) +
            " undetermined: p lies strictly inside the threshold bracket [" +
            to_string(b.lo) + ", " + to_string(b.hi) +
            "]; tighten the table (smaller width target) or move p"),
        n_(n) {}
  int n() const { return n_; }

 private:
  int n_;
};

/**
 * Stop/continue decision at gap 1 for each remaining-step count k = 1..n,
 * read off the threshold records: stop iff p <= p_k. Ties stop, matching the
 * sign convention of the exact tables. Records must cover n = 1..n in order.
 * Throws ambiguous_policy_error when p falls strictly inside a bracket.
 */
inline std::vector<char> resolve_stop_set(
    const std::vector<CriticalValueRecord>& records, const Rational& p,
    int n) {
  if (static_cast<int>(records.size()) < n)
    throw std::domain_error("resolve_stop_set: records do not reach the horizon");
  std::vector<char> stop_at(n + 1, 0);
  for (int k = 1; k <= n; ++k) {
    const CriticalValueRecord& rec = records[k - 1];
    if (rec.n != k)
      throw std::domain_error("resolve_stop_set: records must cover n = 1.. in order");
    if (rec.exact) {
      stop_at[k] = p <= *rec.exact ? 1 : 0;
    } else if (p <= rec.bracket.lo) {
      stop_at[k] = 1;
    } else if (p >= rec.bracket.hi) {
      stop_at[k] = 0;
    } else {
      throw ambiguous_policy_error(k, rec.bracket);
    }
  }
  return stop_at;
}

/// Win probability of the gap-1-threshold policy described by stop_at,
/// which for the table-derived stop set is the value of optimal play.
inline Rational optimal_reference(int n, const Rational& p) {
  if (n < 1) throw std::domain_error("optimal_reference: requires n >= 1");
  if (sgn(p) == 0 || p == 1) return Rational(1);
  return shared_table(n, p)->value(n, 0);
}

/// Win probability of never stopping: the final gap must already be <= 1.
inline Rational stop_never_reference(int n, const Rational& p) {
  if (n < 1) throw std::domain_error("stop_never_reference: requires n >= 1");
  return gap_distribution(n, p).at(1);
}

/**
 * Win probability of committing at the first gap-1 time: condition on the
 * first down step at time j (gap 0 persists through ups), after which the
 * remaining walk must keep its own maximum within 1. The all-up path never
 * sees gap 1 and wins at the horizon.
 */
inline Rational stop_always_reference(int n, const Rational& p) {
  if (n < 1) throw std::domain_error("stop_always_reference: requires n >= 1");
  Rational q = 1 - p;
  Rational sum(0);
  for (int j = 1; j <= n; ++j)
    sum += rpow(p, j - 1) * q * max_le_one_prob(n - j, p);
  return sum + rpow(p, n);
}

inline Rational exact_reference(Policy policy, int n, const Rational& p) {
  switch (policy) {
    case Policy::optimal: return optimal_reference(n, p);
    case Policy::stop_never: return stop_never_reference(n, p);
    default: return stop_always_reference(n, p);
  }
}

struct SimConfig {
  int horizon = 10;
  Rational p = make_rational(1, 2);
  long long trials = 100000;
  std::uint64_t seed = 0;
  Policy policy = Policy::optimal;
  int threads = 1;
  bool want_exact = true;  // attach the exact reference to the result
};

struct SimResult {
  Policy policy = Policy::optimal;
  int horizon = 0;
  long long trials = 0;
  long long wins = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::optional<Rational> exact;  // reference win probability, when requested
};

namespace detail {

constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;
constexpr long long kBlockTrials = 65536;

/// splitmix64 finalizer; decorrelates consecutive block indices.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

inline long long run_block(std::uint64_t block_seed, long long trials, int n,
                           double p, Policy policy,
                           const std::vector<char>& stop_at) {
  std::mt19937_64 rng(block_seed);
  long long wins = 0;
  for (long long i = 0; i < trials; ++i) {
    int s = 0, m = 0;
    bool stopped = false;
    int committed = 0;
    for (int t = 1; t <= n; ++t) {
      if (!stopped && m - s == 1) {
        bool stop = policy == Policy::stop_always_at_gap1 ||
                    (policy == Policy::optimal && stop_at[n - t + 1]);
        if (stop) {
          stopped = true;
          committed = s;
        }
      }
      // The walk always runs to the horizon; stopping only fixes the
      // committed position, and the maximum keeps accumulating after it.
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < p) {
        ++s;
        if (s > m) m = s;
      } else {
        --s;
      }
    }
    if (!stopped) committed = s;
    if (m - committed <= 1) ++wins;
  }
  return wins;
}

}  // namespace detail

/**
 * Runs the Monte Carlo estimate. Trials are partitioned into fixed-size
 * blocks, each with its own generator seeded from (seed, block index), and
 * threads claim blocks from a shared counter: the estimate depends only on
 * (seed, parameters), never on the thread count. For the optimal policy the
 * stop set is resolved from `records` when given, otherwise from a freshly
 * computed threshold table.
 */
inline SimResult simulate(const SimConfig& cfg,
                          const std::vector<CriticalValueRecord>* records = nullptr,
                          SignCache* cache = nullptr) {
  if (cfg.horizon < 1) throw std::domain_error("simulate: requires horizon >= 1");
  if (cfg.trials < 1) throw std::domain_error("simulate: requires trials >= 1");
  if (sgn(cfg.p) < 0 || cfg.p > 1)
    throw std::domain_error("simulate: p must lie in [0, 1]");
  std::vector<char> stop_at;
  if (cfg.policy == Policy::optimal) {
    if (records) {
      stop_at = resolve_stop_set(*records, cfg.p, cfg.horizon);
    } else {
      auto table = critical_table(cfg.horizon, make_rational(1, 10000000),
                                  cfg.threads, cache);
      stop_at = resolve_stop_set(table, cfg.p, cfg.horizon);
    }
  }
  double p = to_double(cfg.p);
  long long blocks =
      (cfg.trials + detail::kBlockTrials - 1) / detail::kBlockTrials;
  std::atomic<long long> next{0};
  std::atomic<long long> total_wins{0};
  auto worker = [&] {
    long long local = 0;
    for (;;) {
      long long b = next.fetch_add(1);
      if (b >= blocks) break;
      long long count = std::min<long long>(detail::kBlockTrials,
                                            cfg.trials - b * detail::kBlockTrials);
      std::uint64_t block_seed =
          detail::mix_seed(cfg.seed + detail::kSeedStride *
                                          static_cast<std::uint64_t>(b + 1));
      local += detail::run_block(block_seed, count, cfg.horizon, p, cfg.policy,
                                 stop_at);
    }
    total_wins.fetch_add(local);
  };
  long long capped = std::min<long long>(cfg.threads, blocks);
  int workers = capped < 1 ? 1 : static_cast<int>(capped);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  SimResult res;
  res.policy = cfg.policy;
  res.horizon = cfg.horizon;
  res.trials = cfg.trials;
  res.wins = total_wins.load();
  res.estimate = static_cast<double>(res.wins) / static_cast<double>(cfg.trials);
  res.std_error = std::sqrt(res.estimate * (1.0 - res.estimate) /
                            static_cast<double>(cfg.trials));
  if (cfg.want_exact) res.exact = exact_reference(cfg.policy, cfg.horizon, cfg.p);
  return res;
}

}  // namespace neartop
