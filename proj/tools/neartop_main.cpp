// Command-line front end: exact threshold tables, verification suites,
// Monte Carlo cross-checks, and the ordering-pattern explorer.
//
// Results go to stdout (csv or json), progress notes to stderr.
// Exit codes: 0 success, 1 a verification check failed, 2 usage error,
// 3 impasse (ambiguous policy bracket or sign-structure failure).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "neartop/critical.hpp"
#include "neartop/rational.hpp"
#include "neartop/simulate.hpp"
#include "neartop/verify.hpp"

namespace {

using neartop::Rational;
using nlohmann::json;

int default_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

class Timer {
 public:
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// json objects sort keys, so dump(2) output is byte-stable under round-trip.
void emit_record(const std::string& command, const json& parameters,
                 const json& results, long long timing_ms) {
  json rec;
  rec["schema_version"] = "1.0";
  rec["command"] = command;
  rec["parameters"] = parameters;
  rec["results"] = results;
  rec["timing_ms"] = timing_ms;
  std::cout << rec.dump(2) << "\n";
}

json critical_row(const neartop::CriticalValueRecord& rec) {
  json row;
  row["n"] = rec.n;
  row["decimal6"] = rec.decimal6;
  if (rec.exact)
    row["exact"] = neartop::to_string(*rec.exact);
  else
    row["exact"] = nullptr;
  row["bracket_lo"] = neartop::to_string(rec.bracket.lo);
  row["bracket_hi"] = neartop::to_string(rec.bracket.hi);
  row["oracle_evals"] = rec.oracle_evals;
  return row;
}

int run_critical(int n, int n_max, const Rational& tol, int threads,
                 const std::string& format) {
  Timer timer;
  std::vector<neartop::CriticalValueRecord> rows;
  json parameters;
  parameters["tol"] = neartop::to_string(tol);
  parameters["threads"] = threads;
  if (n > 0) {
    parameters["n"] = n;
    rows.push_back(neartop::critical_value(n, tol));
  } else {
    parameters["n_max"] = n_max;
    std::cerr << "computing thresholds for n = 1.." << n_max << "\n";
    rows = neartop::critical_table(n_max, tol, threads);
  }
  if (format == "csv") {
    std::cout << "n,decimal6,bracket_lo,bracket_hi,oracle_evals\n";
    for (const auto& rec : rows)
      std::cout << rec.n << "," << rec.decimal6 << ","
                << neartop::to_string(rec.bracket.lo) << ","
                << neartop::to_string(rec.bracket.hi) << ","
                << rec.oracle_evals << "\n";
  } else {
    json results = json::array();
    for (const auto& rec : rows) results.push_back(critical_row(rec));
    emit_record("critical", parameters, results, timer.ms());
  }
  return 0;
}

int run_verify(const std::vector<std::string>& suites, int threads,
               const std::string& format) {
  Timer timer;
  std::vector<neartop::CheckResult> rows;
  for (const auto& name : suites) {
    std::cerr << "running suite " << name << "\n";
    auto part = neartop::run_suite(name, threads);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (format == "csv") {
    std::cout << "suite,check,status,expected,computed\n";
    for (const auto& r : rows)
      std::cout << r.suite << "," << r.check << ","
                << (r.passed ? "pass" : "fail") << "," << r.expected << ","
                << r.computed << "\n";
  } else {
    json parameters;
    parameters["suites"] = suites;
    parameters["threads"] = threads;
    json results = json::array();
    for (const auto& r : rows) {
      json row;
      row["suite"] = r.suite;
      row["check"] = r.check;
      row["status"] = r.passed ? "pass" : "fail";
      row["expected"] = r.expected;
      row["computed"] = r.computed;
      results.push_back(row);
    }
    emit_record("verify", parameters, results, timer.ms());
  }
  return neartop::all_passed(rows) ? 0 : 1;
}

int run_simulate(int horizon, const Rational& p, long long trials,
                 std::uint64_t seed, const std::string& policy_name,
                 int threads, const Rational& tol, const std::string& format) {
  Timer timer;
  neartop::SimConfig cfg;
  cfg.horizon = horizon;
  cfg.p = p;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.policy = neartop::parse_policy(policy_name);
  cfg.threads = threads;
  std::vector<neartop::CriticalValueRecord> records;
  const std::vector<neartop::CriticalValueRecord>* records_ptr = nullptr;
  if (cfg.policy == neartop::Policy::optimal) {
    records = neartop::critical_table(horizon, tol, threads);
    records_ptr = &records;
  }
  neartop::SimResult res = neartop::simulate(cfg, records_ptr);
  double exact = neartop::to_double(*res.exact);
  double abs_error = std::fabs(res.estimate - exact);
  if (format == "csv") {
    std::cout << "policy,horizon,p,trials,wins,estimate,std_error,exact,"
                 "abs_error\n";
    std::cout << policy_name << "," << horizon << "," << neartop::to_string(p)
              << "," << trials << "," << res.wins << ","
              << neartop::detail::fmt(res.estimate) << ","
              << neartop::detail::fmt(res.std_error) << ","
              << neartop::detail::fmt(exact) << ","
              << neartop::detail::fmt(abs_error) << "\n";
  } else {
    json parameters;
    parameters["horizon"] = horizon;
    parameters["p"] = neartop::to_string(p);
    parameters["trials"] = trials;
    parameters["seed"] = seed;
    parameters["policy"] = policy_name;
    parameters["threads"] = threads;
    parameters["tol"] = neartop::to_string(tol);
    json results;
    results["wins"] = res.wins;
    results["estimate"] = res.estimate;
    results["std_error"] = res.std_error;
    results["exact"] = neartop::to_string(*res.exact);
    results["exact_decimal"] = exact;
    results["abs_error"] = abs_error;
    emit_record("simulate", parameters, results, timer.ms());
  }
  return 0;
}

int run_explore(int m_max, const Rational& tol, long long work_cap,
                const std::string& format) {
  Timer timer;
  neartop::PatternOptions opts;
  opts.width_target = tol;
  opts.work_cap = work_cap;
  std::cerr << "exploring ordering claims up to m = " << m_max << "\n";
  neartop::PatternReport report = neartop::explore_patterns(m_max, opts);
  std::cerr << "spent " << report.oracle_evals << " sign queries\n";
  if (format == "csv") {
    std::cout << "claim,detail,status\n";
    for (const auto& r : report.results)
      std::cout << r.claim << "," << r.detail << "," << r.status << "\n";
  } else {
    json parameters;
    parameters["m_max"] = m_max;
    parameters["tol"] = neartop::to_string(tol);
    parameters["work_cap"] = work_cap;
    json instances = json::array();
    for (const auto& r : report.results) {
      json row;
      row["claim"] = r.claim;
      row["detail"] = r.detail;
      row["status"] = r.status;
      instances.push_back(row);
    }
    json families = json::array();
    for (const auto& f : report.claims) {
      json row;
      row["claim"] = f.claim;
      row["range_checked"] = f.range_checked;
      row["holds"] = f.holds;
      if (f.first_violation)
        row["first_violation"] = *f.first_violation;
      else
        row["first_violation"] = nullptr;
      families.push_back(row);
    }
    json results;
    results["instances"] = instances;
    results["families"] = families;
    results["oracle_evals"] = report.oracle_evals;
    results["all_confirmed"] = report.all_confirmed;
    emit_record("explore", parameters, results, timer.ms());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact optimal stopping within one of the running maximum"};
  app.require_subcommand(1);

  std::string format = "csv";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };

  int n = 0, n_max = 0;
  std::string tol_str = "1e-7";
  int threads = default_threads();
  CLI::App* critical = app.add_subcommand(
      "critical", "exact-bracket thresholds for the stop/continue decision");
  auto* opt_n = critical->add_option("--n", n, "single horizon");
  auto* opt_n_max =
      critical->add_option("--n-max", n_max, "all horizons 1..n-max");
  opt_n->excludes(opt_n_max);
  critical->add_option("--tol", tol_str, "bracket width target")
      ->capture_default_str();
  critical->add_option("--threads", threads, "worker threads")
      ->capture_default_str();
  add_format(critical);

  std::vector<std::string> suites;
  CLI::App* verify =
      app.add_subcommand("verify", "run named verification suites");
  verify->add_option("--suite", suites, "suite name (repeatable)")
      ->check(CLI::IsMember(neartop::suite_names()));
  verify->add_option("--threads", threads, "worker threads")
      ->capture_default_str();
  add_format(verify);

  int horizon = 10;
  std::string p_str = "1/2";
  long long trials = 100000;
  std::uint64_t seed = 0;
  std::string policy = "optimal";
  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo check of a stopping policy");
  simulate->add_option("--horizon", horizon, "number of steps")
      ->capture_default_str();
  simulate->add_option("--p", p_str, "up-step probability (exact rational)")
      ->capture_default_str();
  simulate->add_option("--trials", trials, "trial count")
      ->capture_default_str();
  simulate->add_option("--seed", seed, "base seed")->capture_default_str();
  simulate->add_option("--policy", policy, "stopping policy")
      ->check(CLI::IsMember(
          {"optimal", "stop-never", "stop-always-at-gap1"}))
      ->capture_default_str();
  simulate->add_option("--threads", threads, "worker threads")
      ->capture_default_str();
  simulate->add_option("--tol", tol_str, "threshold bracket width")
      ->capture_default_str();
  add_format(simulate);

  int m_max = 40;
  long long work_cap = 50'000'000;
  CLI::App* explore =
      app.add_subcommand("explore", "scan ordering claims about thresholds");
  explore->add_option("--m-max", m_max, "largest claim parameter")
      ->capture_default_str();
  explore->add_option("--tol", tol_str, "initial bracket width")
      ->capture_default_str();
  explore->add_option("--work-cap", work_cap, "sign-query budget")
      ->capture_default_str();
  add_format(explore);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Rational tol = neartop::parse_rational(tol_str);
    if (app.got_subcommand(critical)) {
      if (n <= 0 && n_max <= 0) {
        std::cerr << "critical: provide --n or --n-max (positive)\n";
        return 2;
      }
      return run_critical(n, n_max, tol, threads, format);
    }
    if (app.got_subcommand(verify)) {
      if (suites.empty()) suites = neartop::suite_names();
      return run_verify(suites, threads, format);
    }
    if (app.got_subcommand(simulate))
      return run_simulate(horizon, neartop::parse_rational(p_str), trials,
                          seed, policy, threads, tol, format);
    return run_explore(m_max, tol, work_cap, format);
  } catch (const neartop::ambiguous_policy_error& e) {
    std::cerr << "impasse: " << e.what() << "\n";
    return 3;
  } catch (const neartop::bracket_error& e) {
    std::cerr << "impasse: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
