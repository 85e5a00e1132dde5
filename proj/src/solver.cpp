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

#include "peloton/solver.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace peloton {

namespace {

constexpr long kUndampedIterations = 1000;
constexpr double kDamping = 0.5;

std::string describe(const TeamId& team, long iterations, double residual,
                     const std::string& detail) {
  std::ostringstream os;
  os << "no convergence for team " << team.str() << " after " << iterations
     << " iterations (residual " << residual << ")";
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

double entry_weight(const TeamProblem::RaceBlock& race, const TeamProblem::Entry& e,
                    WeightMode mode) {
  const double w = mode == WeightMode::Points ? e.points / race.team_points : 1.0;
  return e.days * w;
}

// Writes F(x) into out. Returns false if a scoring race has no positive
// weighted mass in its share denominator.
bool map_into(const TeamProblem& problem, const Config& config, std::span<const double> x,
              WeightMode mode, std::vector<double>& out, RaceId* failed_race = nullptr) {
  const double a = config.alpha;
  const double b = config.beta;
  const std::size_t n = problem.riders.size();
  out.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double reference =
        mode == WeightMode::Points ? problem.own_points[i] : problem.participation[i];
    out[i] = a * b * reference + a * (1.0 - b) * problem.participation[i];
  }
  if (a == 1.0) return true;

  const double coupling = 1.0 - a;
  for (const auto& race : problem.races) {
    double denom = 0.0;
    for (const auto& e : race.entries) denom += entry_weight(race, e, mode) * x[e.rider];
    if (!(denom > 0.0)) {
      if (failed_race) *failed_race = race.race;
      return false;
    }
    for (const auto& e : race.entries) {
      const double c = entry_weight(race, e, mode);
      if (c == 0.0) continue;
      out[e.rider] += coupling * (c * x[e.rider] / denom) * race.team_points;
    }
  }
  return true;
}

double step_size(std::span<const double> next, std::span<const double> x) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = std::abs(next[i] - x[i]) / std::max(x[i], 1.0);
    if (!(d <= r)) r = d;  // propagates NaN
  }
  return r;
}

struct TeamSolution {
  std::vector<double> x;
  long iterations = 0;
  double residual = 0.0;
};

std::vector<double> default_start(const TeamProblem& problem, const Config& config,
                                  WeightMode mode) {
  const std::size_t n = problem.riders.size();
  std::vector<double> x(n);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double reference =
        mode == WeightMode::Points ? problem.own_points[i] : problem.participation[i];
    x[i] = config.alpha * config.beta * reference +
           config.alpha * (1.0 - config.beta) * problem.participation[i];
    any = any || x[i] > 0.0;
  }
  if (!any && problem.total_points > 0.0 && n > 0) {
    std::fill(x.begin(), x.end(), problem.total_points / static_cast<double>(n));
  }
  return x;
}

TeamSolution solve_team(const TeamProblem& problem, const Config& config, WeightMode mode,
                        const std::map<RiderId, double>* initial) {
  std::vector<double> x = default_start(problem, config, mode);
  if (initial) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      auto it = initial->find(problem.riders[i]);
      if (it != initial->end() && it->second > 0.0) x[i] = it->second;
    }
  }

  std::vector<double> fx;
  double residual = 0.0;
  for (long k = 0; k < config.max_iterations; ++k) {
    RaceId failed;
    if (!map_into(problem, config, x, mode, fx, &failed)) {
      throw NonConvergence(problem.team, k, residual,
                           "share denominator vanished in race " + failed.str());
    }
    residual = step_size(fx, x);
    if (std::isnan(residual)) {
      throw NonConvergence(problem.team, k, residual, "iterate is not finite");
    }
    if (residual <= config.tolerance) return {std::move(x), k, residual};
    if (k >= kUndampedIterations) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = kDamping * x[i] + (1.0 - kDamping) * fx[i];
    } else {
      x.swap(fx);
    }
  }
  throw NonConvergence(problem.team, config.max_iterations, residual);
}

Allocation solve_with(const Season& season, const Config& config, WeightMode mode,
                      const SolveOptions& options) {
  check_config(config);
  const auto& teams = season.teams();
  std::vector<TeamProblem> problems;
  problems.reserve(teams.size());
  for (const auto& t : teams) problems.push_back(build_team_problem(season, t.id));

  std::vector<TeamSolution> solutions(problems.size());
  std::vector<std::exception_ptr> errors(problems.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < problems.size(); i += stride) {
      try {
        solutions[i] = solve_team(problems[i], config, mode, options.initial);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t jobs =
      std::clamp<std::size_t>(options.jobs == 0 ? 1 : options.jobs, 1, std::max<std::size_t>(problems.size(), 1));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(work, j, jobs);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Allocation out;
  out.config = config;
  for (std::size_t t = 0; t < problems.size(); ++t) {
    const auto& p = problems[t];
    for (std::size_t i = 0; i < p.riders.size(); ++i) {
      out.values[p.riders[i]] = solutions[t].x[i];
      out.team_of[p.riders[i]] = p.team;
    }
    out.iterations_by_team[p.team] = solutions[t].iterations;
    out.residual_by_team[p.team] = solutions[t].residual;
  }
  return out;
}

}  // namespace

NonConvergence::NonConvergence(TeamId team, long iterations, double residual,
                               const std::string& detail)
    : SolverError(describe(team, iterations, residual, detail)),
      team_(std::move(team)),
      iterations_(iterations),
      residual_(residual) {}

std::optional<Config> preset(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (key == "uci") return Config::uci();
  if (key == "part") return Config::part();
  if (key == "cosc") return Config::cosc();
  if (key == "ref") return Config::ref();
  return std::nullopt;
}

std::vector<Config> presets() {
  return {Config::uci(), Config::part(), Config::cosc(), Config::ref()};
}

void check_config(const Config& config) {
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) {
    throw InvalidConfig("alpha must lie in (0, 1]; alpha = 0 is not defined");
  }
  if (!(config.beta >= 0.0 && config.beta <= 1.0)) {
    throw InvalidConfig("beta must lie in [0, 1]");
  }
  if (!(config.tolerance > 0.0) || !std::isfinite(config.tolerance)) {
    throw InvalidConfig("tolerance must be positive");
  }
  if (config.max_iterations < 1) throw InvalidConfig("max_iterations must be at least 1");
}

double Allocation::value(const RiderId& rider) const {
  auto it = values.find(rider);
  return it == values.end() ? 0.0 : it->second;
}

double Allocation::total() const {
  double s = 0.0;
  for (const auto& [rider, v] : values) s += v;
  return s;
}

double Allocation::team_total(const TeamId& team) const {
  double s = 0.0;
  for (const auto& [rider, v] : values) {
    auto it = team_of.find(rider);
    if (it != team_of.end() && it->second == team) s += v;
  }
  return s;
}

TeamProblem build_team_problem(const Season& season, const TeamId& team) {
  TeamProblem p;
  p.team = team;
  p.riders = season.roster(team);
  auto [lo, hi] = season.team_result_range(team);
  const auto& results = season.results();
  for (std::size_t k = lo; k < hi; ++k) p.riders.push_back(results[k].rider);
  std::sort(p.riders.begin(), p.riders.end());
  p.riders.erase(std::unique(p.riders.begin(), p.riders.end()), p.riders.end());

  auto index_of = [&](const RiderId& id) {
    return static_cast<std::size_t>(
        std::lower_bound(p.riders.begin(), p.riders.end(), id) - p.riders.begin());
  };

  p.own_points.assign(p.riders.size(), 0.0);
  p.participation.assign(p.riders.size(), 0.0);
  for (std::size_t k = lo; k < hi;) {
    TeamProblem::RaceBlock block;
    block.race = results[k].race;
    for (; k < hi && results[k].race == block.race; ++k) {
      const auto& r = results[k];
      const std::size_t i = index_of(r.rider);
      block.entries.push_back({i, r.points, r.days});
      block.team_points += r.points;
      block.team_days += r.days;
      p.own_points[i] += r.points;
    }
    if (block.team_points > 0.0) {
      p.total_points += block.team_points;
      for (const auto& e : block.entries) {
        p.participation[e.rider] += e.days / block.team_days * block.team_points;
      }
      p.races.push_back(std::move(block));
    }
  }
  return p;
}

std::vector<double> coscore_shares(const TeamProblem::RaceBlock& race, std::span<const double> x,
                                   WeightMode mode) {
  std::vector<double> shares(race.entries.size(), 0.0);
  if (!(race.team_points > 0.0) && mode == WeightMode::Points) return shares;
  double denom = 0.0;
  for (const auto& e : race.entries) denom += entry_weight(race, e, mode) * x[e.rider];
  if (!(denom > 0.0)) return shares;
  for (std::size_t k = 0; k < race.entries.size(); ++k) {
    const auto& e = race.entries[k];
    shares[k] = entry_weight(race, e, mode) * x[e.rider] / denom;
  }
  return shares;
}

std::vector<double> apply_map(const TeamProblem& problem, const Config& config,
                              std::span<const double> x, WeightMode mode) {
  std::vector<double> out;
  map_into(problem, config, x, mode, out);
  return out;
}

Allocation solve(const Season& season, const Config& config, const SolveOptions& options) {
  return solve_with(season, config, WeightMode::Points, options);
}

Allocation solve_unweighted(const Season& season, const Config& config,
                            const SolveOptions& options) {
  return solve_with(season, config, WeightMode::Uniform, options);
}

double fixed_point_residual(const Season& season, const Allocation& allocation,
                            WeightMode mode) {
  double worst = 0.0;
  for (const auto& t : season.teams()) {
    auto problem = build_team_problem(season, t.id);
    std::vector<double> x(problem.riders.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = allocation.value(problem.riders[i]);
    std::vector<double> fx;
    if (!map_into(problem, allocation.config, x, mode, fx)) {
      return std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, step_size(fx, x));
  }
  return worst;
}

std::map<RiderId, ComponentValues> component_values(const Season& season) {
  const auto uci = solve(season, Config::uci());
  const auto part = solve(season, Config::part());
  Config cosc = Config::cosc();
  const auto coscore = solve(season, cosc);
  std::map<RiderId, ComponentValues> out;
  for (const auto& [rider, v] : uci.values) {
    out[rider] = {v, part.value(rider), coscore.value(rider)};
  }
  return out;
}

}  // namespace peloton
