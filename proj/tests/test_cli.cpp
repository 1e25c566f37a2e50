// End-to-end checks of the command-line front end: output formats, exact
// rational round-trips, and the exit-code contract.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

#include "neartop/rational.hpp"

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

// Runs the binary named by NEARTOP_CLI_PATH, capturing stdout only.
CliRun run_cli(const std::string& args) {
  const char* path = std::getenv("NEARTOP_CLI_PATH");
  REQUIRE(path != nullptr);
  std::string cmd = std::string(path) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliRun r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t nl = s.find('\n', pos);
    if (nl == std::string::npos) nl = s.size();
    out.push_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t c = line.find(',', pos);
    if (c == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, c - pos));
    pos = c + 1;
  }
  return out;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

}  // namespace

TEST_CASE("usage errors and help") {
  REQUIRE(run_cli("--help").status == 0);
  REQUIRE(run_cli("critical --help").status == 0);
  REQUIRE(run_cli("nonsense").status == 2);
  REQUIRE(run_cli("critical --no-such-flag").status == 2);
  REQUIRE(run_cli("critical").status == 2);
  REQUIRE(run_cli("critical --n 0").status == 2);
  REQUIRE(run_cli("critical --n 4 --n-max 8").status == 2);
  REQUIRE(run_cli("verify --suite bogus").status == 2);
  REQUIRE(run_cli("simulate --policy sometimes").status == 2);
  REQUIRE(run_cli("simulate --trials 0 --policy stop-never").status == 2);
  REQUIRE(run_cli("explore --m-max 4").status == 2);
}

TEST_CASE("threshold table as csv") {
  auto r = run_cli("critical --n-max 3 --format csv");
  REQUIRE(r.status == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 4);
  REQUIRE(ls[0] == "n,decimal6,bracket_lo,bracket_hi,oracle_evals");
  REQUIRE(starts_with(ls[1], "1,1.000000,1,1,"));
  REQUIRE(starts_with(ls[2], "2,0.500000,1/2,1/2,"));
  REQUIRE(starts_with(ls[3], "3,0.500000,1/2,1/2,"));

  auto r4 = run_cli("critical --n 4 --format csv");
  REQUIRE(r4.status == 0);
  auto ls4 = lines(r4.out);
  REQUIRE(ls4.size() == 2);
  REQUIRE(starts_with(ls4[1], "4,0.468989,"));
}

TEST_CASE("verification suite as csv") {
  auto r = run_cli("verify --suite theorem-a --format csv");
  REQUIRE(r.status == 0);
  auto ls = lines(r.out);
  REQUIRE(ls[0] == "suite,check,status,expected,computed");
  REQUIRE(ls.size() > 1);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    auto f = fields(ls[i]);
    REQUIRE(f.size() == 5);
    REQUIRE(f[0] == "theorem-a");
    REQUIRE(f[2] == "pass");
  }
}

TEST_CASE("verification suite as json round-trips byte-identically") {
  auto r = run_cli("verify --suite deltas --format json");
  REQUIRE(r.status == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["schema_version"] == "1.0");
  REQUIRE(j["command"] == "verify");
  REQUIRE(j["parameters"]["suites"] == nlohmann::json::array({"deltas"}));
  REQUIRE(j["results"].is_array());
  REQUIRE(!j["results"].empty());
  for (const auto& row : j["results"]) REQUIRE(row["status"] == "pass");
  REQUIRE(j.dump(2) + "\n" == r.out);
}

TEST_CASE("simulation with a degenerate probability is exact") {
  auto r = run_cli(
      "simulate --horizon 10 --p 0 --trials 1000 --policy optimal --format csv");
  REQUIRE(r.status == 0);
  auto ls = lines(r.out);
  REQUIRE(ls.size() == 2);
  REQUIRE(ls[0] ==
          "policy,horizon,p,trials,wins,estimate,std_error,exact,abs_error");
  auto f = fields(ls[1]);
  REQUIRE(f.size() == 9);
  REQUIRE(f[0] == "optimal");
  REQUIRE(f[1] == "10");
  REQUIRE(f[2] == "0");
  REQUIRE(f[3] == "1000");
  REQUIRE(f[4] == "1000");
  REQUIRE(f[5] == "1");
  REQUIRE(f[7] == "1");
  REQUIRE(f[8] == "0");
}

TEST_CASE("a probability inside the bracket is an impasse, not a guess") {
  auto r4 = run_cli("critical --n 4 --format csv");
  REQUIRE(r4.status == 0);
  auto f = fields(lines(r4.out)[1]);
  neartop::Rational lo = neartop::parse_rational(f[2]);
  neartop::Rational hi = neartop::parse_rational(f[3]);
  REQUIRE(lo < hi);
  neartop::Rational mid = (lo + hi) / 2;
  auto r = run_cli("simulate --horizon 5 --p " + neartop::to_string(mid) +
                   " --trials 10 --policy optimal --format csv");
  REQUIRE(r.status == 3);
}

TEST_CASE("pattern exploration as csv") {
  auto r = run_cli("explore --m-max 5 --format csv");
  REQUIRE(r.status == 0);
  auto ls = lines(r.out);
  REQUIRE(ls[0] == "claim,detail,status");
  REQUIRE(ls.size() > 1);
  bool saw_shift8 = false, saw_chain = false, saw_even = false;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    auto f = fields(ls[i]);
    REQUIRE(f.size() == 3);
    REQUIRE(f[2] == "holds");
    if (f[0] == "shift8-ge-odd") saw_shift8 = true;
    if (f[0] == "odd-pair-chain") saw_chain = true;
    if (f[0] == "even-increasing") saw_even = true;
  }
  REQUIRE(saw_shift8);
  REQUIRE(saw_chain);
  REQUIRE(saw_even);
}
