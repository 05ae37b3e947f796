// Acceptance suite: runs every acceptance criterion and prints one pass/fail
// line per criterion. Exits nonzero if any criterion fails. The CLI binary
// path may be passed as argv[1]; criteria that exercise the CLI are skipped
// (and counted as failures) without it.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "collatz/claims.hpp"
#include "collatz/exact.hpp"
#include "collatz/sweep.hpp"
#include "collatz/trajectory.hpp"
#include "oracle.hpp"

using collatz::BigInt;
using collatz::Rational;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": "
            << detail << "\n";
  if (!ok) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string g_cli;

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  CliResult r;
  FILE* pipe = popen((g_cli + " " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// 1. trajectory 6 and trajectory 19 reproduce the published tuples, < 1 ms.
void criterion1() {
  const std::vector<BigInt> t6 = {6, 3, 10, 5, 16, 8, 4, 2};
  const std::vector<BigInt> t19 = {19, 58, 29, 88, 44, 22, 11, 34, 17, 52,
                                   26, 13, 40, 20, 10, 5,  16, 8,  4,  2};

  // warm up allocators before timing
  collatz::compute_trajectory(6, collatz::kDefaultBudget, true);

  auto t0 = Clock::now();
  auto r6 = collatz::compute_trajectory(6, collatz::kDefaultBudget, true);
  auto r19 = collatz::compute_trajectory(19, collatz::kDefaultBudget, true);
  double secs = seconds_since(t0);

  bool ok = r6.k == 8 && *r6.tuple == t6 && r19.k == 20 && *r19.tuple == t19 &&
            secs < 0.001;

  if (!g_cli.empty()) {
    CliResult c6 = run_cli("trajectory 6 --tuple");
    CliResult c19 = run_cli("trajectory 19 --tuple --format json");
    ok = ok && c6.exit_code == 0 &&
         c6.output.find("tuple = (6, 3, 10, 5, 16, 8, 4, 2)") != std::string::npos;
    if (c19.exit_code == 0) {
      auto doc = nlohmann::json::parse(c19.output, nullptr, false);
      ok = ok && !doc.is_discarded() && doc["k"] == 20 &&
           doc["tuple"].size() == 20 && doc["tuple"][11] == "13";
    } else {
      ok = false;
    }
  } else {
    ok = false;
  }

  std::ostringstream d;
  d << "trajectories 6 and 19 reproduce the published tuples exactly ("
    << secs * 1000 << " ms)";
  report(1, ok, d.str());
}

// 2. f_{X,Y}(n) = 1 exactly for every n in [1, 1e5], exact ceiling, < 60 s.
void criterion2() {
  auto t0 = Clock::now();
  bool ok = true;
  std::uint64_t bad_n = 0;
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    collatz::TrajectoryStats s = collatz::trajectory_stats(n);
    if (!s.completed ||
        collatz::exact::f_xy(BigInt(n), s.x_count, s.y_count) != 1) {
      ok = false;
      bad_n = n;
      break;
    }
  }
  double secs = seconds_since(t0);
  ok = ok && secs < 60.0;
  std::ostringstream d;
  d << "f_{X,Y}(n) = 1 for all n in [1, 1e5] (" << secs << " s, limit 60)";
  if (bad_n) d << " -- first failure at n = " << bad_n;
  report(2, ok, d.str());
}

// 3. 0 <= eps < 1/3 on [1, 1e5]; eps = 0 on every power of two in range.
void criterion3() {
  bool ok = true;
  const Rational third(1, 3);
  for (std::uint64_t n = 1; n <= 100'000 && ok; ++n) {
    collatz::TrajectoryStats s = collatz::trajectory_stats(n);
    Rational eps = collatz::exact::epsilon(BigInt(n), s.x_count, s.y_count);
    ok = s.completed && eps >= 0 && eps < third;
  }
  for (std::uint64_t i = 1; (std::uint64_t{1} << i) <= 100'000 && ok; ++i) {
    std::uint64_t n = std::uint64_t{1} << i;
    ok = collatz::exact::epsilon(BigInt(n), 0, i) == 0;
  }
  report(3, ok,
         "0 <= eps < 1/3 on [1, 1e5], with eps = 0 on all powers of two");
}

// 4. floor(n') = n, {n'} = (1 - 3^-X)/2, eps_n < 3^-(X+1) on [1, 1e5].
void criterion4() {
  bool ok = true;
  std::uint64_t bad_n = 0;
  for (std::uint64_t n = 1; n <= 100'000; ++n) {
    collatz::TrajectoryStats s = collatz::trajectory_stats(n);
    const BigInt bn(n);
    auto w = collatz::exact::make_witness(bn, s.x_count, s.y_count);
    bool here = s.completed &&
        collatz::exact::recover_n(w.n_prime) == bn &&
        w.frac_n_prime == collatz::exact::half_one_minus_pow3_neg(s.x_count) &&
        w.epsilon_n >= 0 &&
        w.epsilon_n < Rational(1, collatz::exact::pow3(s.x_count + 1));
    if (!here) {
      ok = false;
      bad_n = n;
      break;
    }
  }
  std::ostringstream d;
  d << "floor(n') = n, {n'} = (1 - 3^-X)/2, eps_n < 3^-(X+1) on [1, 1e5]";
  if (bad_n) d << " -- first failure at n = " << bad_n;
  report(4, ok, d.str());
}

// 5. C7 and C6 falsified with minimal witness (12, 13); C3 with n = 2.
void criterion5() {
  using namespace collatz::claims;
  ClaimResult c7 = check_claim("C7", 1, 1000);
  ClaimResult c6 = check_claim("C6", 1, 1000);
  ClaimResult c3 = check_claim("C3", 1, 1000);

  bool ok7 = c7.verdict == Verdict::Falsified && !c7.counterexamples.empty() &&
             c7.counterexamples[0].subjects == std::vector<BigInt>{12, 13} &&
             c7.counterexamples[0].detail["x"] == 2 &&
             c7.counterexamples[0].detail["y"] == 7;
  bool ok6 = c6.verdict == Verdict::Falsified && !c6.counterexamples.empty() &&
             c6.counterexamples[0].subjects == std::vector<BigInt>{12, 13} &&
             c6.counterexamples[0].detail["epsilon_a"] == "1/8" &&
             c6.counterexamples[0].detail["epsilon_b"] == "7/128";
  bool ok3 = c3.verdict == Verdict::Falsified && !c3.counterexamples.empty() &&
             c3.counterexamples[0].subjects == std::vector<BigInt>{2};

  bool cli_ok = true;
  if (!g_cli.empty()) {
    cli_ok = run_cli("claims --from 1 --to 1000 --claim C7").exit_code == 1;
  }
  report(5, ok7 && ok6 && ok3 && cli_ok,
         "C7 and C6 falsified by (12, 13) with (X,Y) = (2,7), eps 1/8 vs "
         "7/128; C3 falsified by n = 2");
}

// 6. Sweep statistics vs an independent oracle; [1, 1e6] under 10 s.
void criterion6() {
  // oracle values first, from the plain loop
  std::uint64_t o10_k = 0, o10_n = 0, o100_k = 0, o100_n = 0;
  std::uint64_t o1m_k = 0, o1m_n = 0;
  for (std::uint64_t n = 1; n <= 1'000'000; ++n) {
    oracle::Outcome o = oracle::run(n);
    if (n <= 10 && (o.k > o10_k || o10_n == 0)) { o10_k = o.k; o10_n = n; }
    if (n <= 100 && (o.k > o100_k || o100_n == 0)) { o100_k = o.k; o100_n = n; }
    if (o.k > o1m_k || o1m_n == 0) { o1m_k = o.k; o1m_n = n; }
  }
  bool oracle_ok = o10_k == 19 && o10_n == 9 && o100_k == 118 &&
                   o100_n == 97 && o1m_k == 524 && o1m_n == 837799;

  collatz::sweep::SweepConfig cfg;
  cfg.lo = 1;
  cfg.hi = 10;
  auto s10 = collatz::sweep::sweep_range(cfg);
  cfg.hi = 100;
  auto s100 = collatz::sweep::sweep_range(cfg);
  cfg.hi = 1'000'000;
  auto t0 = Clock::now();
  auto s1m = collatz::sweep::sweep_range(cfg);
  double secs = seconds_since(t0);

  bool sweep_ok = s10.totals.max_k == 19 && s10.totals.argmax_n == 9 &&
                  s100.totals.max_k == 118 && s100.totals.argmax_n == 97 &&
                  s1m.totals.max_k == 524 && s1m.totals.argmax_n == 837799;
  bool claims_ok = true;
  for (const char* id : {"C1", "C2", "C4", "C5"}) {
    const auto& t = s1m.totals.claim_tallies.at(id);
    claims_ok = claims_ok && t.verified == 1'000'000 && t.falsified == 0 &&
                t.indeterminate == 0;
  }
  std::ostringstream d;
  d << "sweep max k: 19@9, 118@97, 524@837799, matching the independent "
       "oracle; C1 C2 C4 C5 verified on [1, 1e6] (" << secs
    << " s, limit 10)";
  report(6, oracle_ok && sweep_ok && claims_ok && secs < 10.0, d.str());
}

// 7. Byte-identical summaries across workers {1,4} x chunk {100, 65536}.
void criterion7() {
  std::string reference;
  bool ok = true;
  for (unsigned workers : {1u, 4u}) {
    for (std::uint64_t chunk : {std::uint64_t{100}, std::uint64_t{65536}}) {
      collatz::sweep::SweepConfig cfg;
      cfg.lo = 1;
      cfg.hi = 100'000;
      cfg.workers = workers;
      cfg.chunk_size = chunk;
      std::string serialized =
          collatz::sweep::sweep_range(cfg).to_json().dump();
      if (reference.empty()) reference = serialized;
      ok = ok && serialized == reference;
    }
  }
  report(7, ok,
         "sweeps of [1, 1e5] serialize byte-identically for workers in {1,4} "
         "and chunk_size in {100, 2^16}");
}

// 8. Scale honesty: the report carries the extrapolation note; the 20*2^58
// figure is explicitly out of reach.
void criterion8() {
  collatz::sweep::SweepConfig cfg;
  cfg.lo = 1;
  cfg.hi = 1000;
  auto s = collatz::sweep::sweep_range(cfg);
  bool ok = s.note.find("20*2^58") != std::string::npos &&
            s.note.find("does not approach") != std::string::npos;
  auto j = s.to_json();
  ok = ok && j.contains("note") && !j["note"].get<std::string>().empty();
  report(8, ok,
         "sweep output documents that the published 20*2^58 bound is not "
         "reproduced at desk scale");
}

// 9. Fast path vs pure bignum on 1e4 random n near 2^62.
void criterion9() {
  std::mt19937_64 rng(0x5EED);
  bool ok = true;
  std::uint64_t bad_n = 0;
  for (int i = 0; i < 10'000; ++i) {
    std::uint64_t n = (std::uint64_t{1} << 62) + (rng() >> 8);
    collatz::TrajectoryStats fast = collatz::trajectory_stats(n);
    oracle::Outcome slow = oracle::run(n);
    if (!(fast.completed && fast.k == slow.k && fast.x_count == slow.x &&
          fast.y_count == slow.y && fast.peak == slow.peak)) {
      ok = false;
      bad_n = n;
      break;
    }
  }
  std::ostringstream d;
  d << "overflow-promoting fast path matches pure bignum (k, X, Y, peak) on "
       "1e4 seeds near 2^62";
  if (bad_n) d << " -- mismatch at n = " << bad_n;
  report(9, ok, d.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures == 0) {
    std::cout << "all acceptance criteria passed\n";
    return 0;
  }
  std::cout << g_failures << " acceptance criteria failed\n";
  return 1;
}
