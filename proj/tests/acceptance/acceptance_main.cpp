// Copyright 2026 The Peloton Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the ten acceptance criteria and prints one PASS, FAIL or SKIP line
// for each. Exits non-zero when any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "peloton/analysis.hpp"
#include "peloton/solver.hpp"
#include "peloton/synth.hpp"

using namespace peloton;
namespace fs = std::filesystem;
namespace pt = peloton::testing;

namespace {

enum class Outcome { Pass, Fail, Skip };

struct Verdict {
  Outcome outcome = Outcome::Fail;
  std::string detail;
};

Verdict pass(std::string d) { return {Outcome::Pass, std::move(d)}; }
Verdict fail(std::string d) { return {Outcome::Fail, std::move(d)}; }
Verdict skip(std::string d) { return {Outcome::Skip, std::move(d)}; }

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + PELOTON_CLI_PATH + "\" " + args + " >\"" +
                          log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

const RiderId r1("r1"), r2("r2"), r3("r3");

Verdict participation_corner() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto x = solve(pt::worked_example(), Config{1.0, 0.0});
  const double elapsed = seconds_since(t0);
  const double share = 100.0 * x.value(r1) / x.total();
  const bool ok = std::abs(x.value(r1) - 1866.667) <= 0.01 &&
                  std::abs(x.value(r2) - 1166.667) <= 0.01 &&
                  std::abs(x.value(r3) - 1166.667) <= 0.01 && std::abs(share - 44.44) < 0.01 &&
                  elapsed < 1.0;
  const std::string d = "rider1=" + fmt(x.value(r1), 10) + " (" + fmt(share, 4) + "%), rider2=" +
                        fmt(x.value(r2), 10) + ", rider3=" + fmt(x.value(r3), 10) + ", " +
                        fmt(elapsed, 3) + " s";
  return ok ? pass(d) : fail(d);
}

Verdict weighted_coscore() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto x = solve(pt::worked_example(), Config{0.1, 1.0});
  const double elapsed = seconds_since(t0);
  const bool ok = std::abs(x.value(r1) - 286.55) <= 0.5 && std::abs(x.total() - 4200.0) <= 1e-4 &&
                  elapsed < 1.0;
  const std::string d = "rider1=" + fmt(x.value(r1), 10) + ", team total=" + fmt(x.total(), 12) +
                        ", " + fmt(elapsed, 3) + " s";
  return ok ? pass(d) : fail(d);
}

Verdict unweighted_coscore() {
  const auto x = solve_unweighted(pt::worked_example(), Config{0.1, 1.0});
  const double share = 100.0 * x.value(r1) / x.total();
  const std::string d = "rider1 share=" + fmt(share, 5) + "%";
  return std::abs(share - 84.0) <= 2.0 ? pass(d) : fail(d);
}

std::vector<Season> synthetic_seasons(std::uint64_t seed, int count) {
  SplitMix64 rng(seed);
  std::vector<Season> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(pt::random_season(rng));
  return out;
}

std::map<RiderId, double> participation_shares(const Season& s) {
  std::map<std::pair<RaceId, TeamId>, std::pair<double, double>> sums;
  for (const auto& r : s.results()) {
    auto& [p, d] = sums[{r.race, r.team}];
    p += r.points;
    d += r.days;
  }
  std::map<RiderId, double> out;
  for (const auto& r : s.results()) {
    const auto [p, d] = sums[{r.race, r.team}];
    out[r.rider] += p > 0.0 ? r.days / d * p : 0.0;
  }
  return out;
}

Verdict corner_identities(const std::vector<Season>& seasons) {
  std::size_t raw_mismatch = 0, part_mismatch = 0;
  double worst_linear = 0.0;
  for (const auto& s : seasons) {
    const auto totals = season_totals(s);
    const auto expected_part = participation_shares(s);
    const auto uci = solve(s, Config{1.0, 1.0});
    const auto part = solve(s, Config{1.0, 0.0});
    for (const auto& [rider, v] : uci.values) {
      const auto it = totals.rider_points.find(rider);
      if (v != (it == totals.rider_points.end() ? 0.0 : it->second)) ++raw_mismatch;
      const auto jt = expected_part.find(rider);
      if (part.value(rider) != (jt == expected_part.end() ? 0.0 : jt->second)) ++part_mismatch;
    }
    for (double beta : {0.1, 0.5, 0.75}) {
      const auto mid = solve(s, Config{1.0, beta});
      for (const auto& [rider, v] : mid.values) {
        const double lin = beta * uci.value(rider) + (1.0 - beta) * part.value(rider);
        worst_linear = std::max(worst_linear, std::abs(v - lin));
      }
    }
  }
  const std::string d = std::to_string(seasons.size()) + " seasons, raw mismatches " +
                        std::to_string(raw_mismatch) + ", participation mismatches " +
                        std::to_string(part_mismatch) + ", max linearity error " +
                        fmt(worst_linear, 3);
  return raw_mismatch == 0 && part_mismatch == 0 && worst_linear <= 1e-12 ? pass(d) : fail(d);
}

Verdict conservation(const std::vector<Season>& seasons) {
  double worst = 0.0;
  std::size_t checks = 0;
  for (const auto& s : seasons) {
    const auto totals = season_totals(s);
    for (const auto& config : presets()) {
      const auto x = solve(s, config);
      for (const auto& t : s.teams()) {
        const auto it = totals.team_points.find(t.id);
        const double p = it == totals.team_points.end() ? 0.0 : it->second;
        worst = std::max(worst, std::abs(x.team_total(t.id) - p) / std::max(p, 1.0));
        ++checks;
      }
    }
  }
  const std::string d = std::to_string(checks) + " team checks, max relative imbalance " +
                        fmt(worst, 3);
  return worst <= 1e-6 ? pass(d) : fail(d);
}

// Both paths are compared at the reference solver's tolerance. The stopping
// rule bounds the last step by tolerance * max(x, 1), so at the default
// 1e-10 a rider near 1000 points can sit about 1e-7 from the fixed point;
// that gap is measured and reported alongside.
Verdict oracle_equivalence() {
  constexpr double kMatchedTolerance = 1e-12;
  const auto t0 = std::chrono::steady_clock::now();
  SplitMix64 rng(20260601);
  double worst = 0.0;
  double worst_default = 0.0;
  int seasons = 0;
  for (; seasons < 200; ++seasons) {
    const Season s = pt::small_random_season(rng);
    for (double alpha : {0.1, 1.0 / 3.0, 0.9}) {
      for (double beta : {0.0, 0.5, 1.0}) {
        const auto y = oracle_solve(s, Config{alpha, beta});
        const auto x = solve(s, Config{alpha, beta, kMatchedTolerance});
        const auto d = solve(s, Config{alpha, beta});
        for (const auto& [rider, v] : y.values) {
          worst = std::max(worst, std::abs(v - x.value(rider)));
          worst_default = std::max(worst_default, std::abs(v - d.value(rider)));
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  const std::string d = std::to_string(seasons) + " seasons x 9 configs at tolerance 1e-12, " +
                        "max |solve - oracle| " + fmt(worst, 3) + " (default tolerance: " +
                        fmt(worst_default, 3) + "), " + fmt(elapsed, 3) + " s";
  return worst <= 1e-8 && elapsed < 30.0 ? pass(d) : fail(d);
}

Verdict statistics_oracles() {
  const std::vector<double> a{1, 2, 3, 4}, rev{4, 3, 2, 1};
  const double identical = kendall_tau_b(a, a);
  const double reversed = kendall_tau_b(a, rev);
  const double partial = kendall_tau_b(a, std::vector<double>{1, 3, 2, 4});
  const double r = pearson(a, std::vector<double>{2, 1, 4, 3});

  SplitMix64 rng(77);
  double worst_row = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 4 + rng.below(300);
    Allocation x, y;
    for (std::size_t i = 0; i < n; ++i) {
      const RiderId id("r" + std::to_string(i));
      x.values[id] = static_cast<double>(rng.below(40));
      y.values[id] = static_cast<double>(rng.below(40));
      x.team_of[id] = y.team_of[id] = TeamId("T");
    }
    const auto m = transition_matrix(rank(x), rank(y));
    for (const auto& row : m.percent) {
      worst_row = std::max(worst_row, std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 100.0));
    }
  }
  const bool ok = identical == 1.0 && reversed == -1.0 && std::abs(partial - 0.6667) <= 1e-4 &&
                  std::abs(partial - 4.0 / 6.0) <= 1e-9 && std::abs(r - 0.6) <= 1e-12 &&
                  worst_row <= 0.01;
  const std::string d = "tau(id)=" + fmt(identical) + ", tau(rev)=" + fmt(reversed) +
                        ", tau(4-case)=" + fmt(partial, 12) + ", pearson=" + fmt(r, 15) +
                        ", max row error " + fmt(worst_row, 3);
  return ok ? pass(d) : fail(d);
}

// The TOTAL line of the validate summary carries riders, races, points and days.
Verdict dataset_totals(const fs::path& work) {
  const char* env = std::getenv("PELOTON_DATASET_DIR");
  if (env == nullptr || *env == '\0') return skip("PELOTON_DATASET_DIR not set");
  const fs::path data(env);
  std::string args = "validate " + quoted(data);
  if (fs::exists(data / "directives.csv")) args += " --directives " + quoted(data / "directives.csv");
  const fs::path log = work / "validate.txt";
  const int code = run_cli(args, log);
  if (code != 0) return fail("validate exited with " + std::to_string(code));
  std::istringstream in(pt::read_text(log));
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("TOTAL", 0) != 0) continue;
    std::istringstream fields(line.substr(5));
    std::string riders, races, points, days;
    fields >> riders >> races >> points >> days;
    const bool ok = riders == "643" && races == "182" && points == "280852.75" && days == "36910";
    const std::string d = "riders " + riders + ", races " + races + ", points " + points +
                          ", days " + days;
    return ok ? pass(d) : fail(d);
  }
  return fail("no TOTAL line in validate output");
}

constexpr const char* kGoldenSynth =
    "synth --teams 6 --riders-per-team 9 --races 40 --leader-fraction 0.25 --points-scale 300 "
    "--seed 20231";

Verdict golden_report(const fs::path& work) {
  const fs::path data = work / "golden_season";
  const fs::path out = work / "golden_report.json";
  if (run_cli(std::string(kGoldenSynth) + " -o " + quoted(data), work / "synth.txt") != 0) {
    return fail("synth failed");
  }
  if (run_cli("analyze " + quoted(data) + " --baseline uci --against part,cosc,ref -o " +
                  quoted(out),
              work / "analyze.txt") != 0) {
    return fail("analyze failed: " + pt::read_text(work / "analyze.txt"));
  }
  const fs::path golden = fs::path(PELOTON_GOLDEN_DIR) / "analyze_report.json";
  if (std::getenv("PELOTON_UPDATE_GOLDEN") != nullptr) {
    fs::copy_file(out, golden, fs::copy_options::overwrite_existing);
  }
  if (!fs::exists(golden)) return fail("missing " + golden.string());
  const std::string got = pt::read_text(out);
  const std::string want = pt::read_text(golden);
  const std::string d = std::to_string(got.size()) + " bytes vs golden " +
                        std::to_string(want.size()) + " bytes";
  return got == want ? pass("byte-identical, " + d) : fail("report differs, " + d);
}

Verdict determinism(const fs::path& work) {
  const fs::path data = work / "det_season";
  if (run_cli("synth --teams 12 --riders-per-team 8 --races 60 --seed 99 -o " + quoted(data),
              work / "synth2.txt") != 0) {
    return fail("synth failed");
  }
  const std::vector<std::pair<std::string, std::string>> runs{
      {"solve", "--preset ref"},
      {"solve", "--alpha 0.25 --beta 0.6"},
      {"sweep", "--alpha-grid 0.1:1:0.3 --beta-grid 0:1:0.25 --with-presets"},
  };
  std::size_t compared = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    std::string first;
    for (const char* jobs : {"1", "1", "3", "8"}) {
      const fs::path out = work / ("det_" + std::to_string(k) + "_" + jobs + ".csv");
      const std::string args = runs[k].first + " " + quoted(data) + " " + runs[k].second +
                               " --jobs " + jobs + " -o " + quoted(out);
      if (run_cli(args, work / "det.txt") != 0) return fail(runs[k].first + " failed");
      const std::string bytes = pt::read_text(out);
      if (first.empty()) {
        first = bytes;
      } else if (bytes != first) {
        return fail(runs[k].first + " " + runs[k].second + " differs at --jobs " + jobs);
      }
      ++compared;
    }
  }
  return pass(std::to_string(compared) + " runs across jobs 1, 3, 8 byte-identical");
}

}  // namespace

int main() {
  const fs::path work = pt::scratch_dir("acceptance");
  std::vector<Season> seasons;
  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"worked example, participation corner", participation_corner},
      {"worked example, weighted CoScore", weighted_coscore},
      {"worked example, unweighted CoScore share", unweighted_coscore},
      {"corner identities on 1000 synthetic seasons",
       [&] { return corner_identities(seasons); }},
      {"conservation on 1000 seasons x 4 presets", [&] { return conservation(seasons); }},
      {"oracle equivalence on 200 small seasons", oracle_equivalence},
      {"statistics oracles", statistics_oracles},
      {"dataset totals via validate", [&] { return dataset_totals(work); }},
      {"golden analyze report", [&] { return golden_report(work); }},
      {"byte determinism across job counts", [&] { return determinism(work); }},
  };
  seasons = synthetic_seasons(1000003, 1000);

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = fail(std::string("exception: ") + e.what());
    }
    const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Skip ? "SKIP" : "FAIL";
    if (v.outcome == Outcome::Fail) ++failures;
    std::cout << tag << " criterion " << (i + 1) << ": " << criteria[i].first << " (" << v.detail
              << ")\n";
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed or skipped\n"
                              : "acceptance: " + std::to_string(failures) + " criteria failed\n");
  return failures == 0 ? 0 : 1;
}
