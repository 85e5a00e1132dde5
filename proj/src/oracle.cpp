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

// Reference solver kept deliberately separate from solver.cpp: it shares no
// code with the production path beyond the data model, evaluates the
// allocation formula term by term on rider-keyed maps, and starts from a
// different point.

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "peloton/solver.hpp"

namespace peloton {

namespace {

constexpr double kOracleTolerance = 1e-12;
constexpr long kOracleMinIterations = 1000000;

struct Start {
  RiderId rider;
  double points;
  double days;
};

using RaceTable = std::map<RaceId, std::vector<Start>>;

std::map<RiderId, double> right_hand_side(const RaceTable& races,
                                          const std::map<RiderId, double>& x, double alpha,
                                          double beta) {
  std::map<RiderId, double> out;
  for (const auto& [rider, v] : x) out[rider] = 0.0;
  for (const auto& [race, starts] : races) {
    double p = 0.0;
    double d = 0.0;
    for (const auto& s : starts) {
      p += s.points;
      d += s.days;
    }
    if (p <= 0.0) continue;
    double mass = 0.0;
    for (const auto& s : starts) mass += s.days * (s.points / p) * x.at(s.rider);
    for (const auto& s : starts) {
      const double w = s.points / p;
      const double own = alpha * beta * s.points;
      const double egalitarian = alpha * (1.0 - beta) * (s.days / d) * p;
      const double credit =
          mass > 0.0 ? (1.0 - alpha) * (s.days * w * x.at(s.rider) / mass) * p : 0.0;
      out[s.rider] += own + egalitarian + credit;
    }
  }
  return out;
}

}  // namespace

Allocation oracle_solve(const Season& season, const Config& config) {
  check_config(config);
  const long max_iterations = std::max(config.max_iterations, kOracleMinIterations);

  Allocation out;
  out.config = config;
  for (const auto& team : season.teams()) {
    RaceTable races;
    std::map<RiderId, double> x;
    for (const auto& id : season.roster(team.id)) x[id] = 0.0;
    double season_points = 0.0;
    for (const auto& r : season.results()) {
      if (r.team != team.id) continue;
      races[r.race].push_back({r.rider, r.points, r.days});
      x.try_emplace(r.rider, 0.0);
      season_points += r.points;
    }

    std::vector<RiderId> starters;
    for (const auto& [race, starts] : races) {
      for (const auto& s : starts) {
        if (s.days > 0.0) starters.push_back(s.rider);
      }
    }
    std::sort(starters.begin(), starters.end());
    starters.erase(std::unique(starters.begin(), starters.end()), starters.end());
    for (const auto& id : starters) x[id] = season_points / static_cast<double>(starters.size());

    long it = 0;
    double change = 0.0;
    for (;; ++it) {
      auto next = right_hand_side(races, x, config.alpha, config.beta);
      change = 0.0;
      for (const auto& [rider, v] : x) {
        change = std::max(change, std::abs(next[rider] - v) / std::max(v, 1.0));
      }
      if (!std::isfinite(change)) throw NonConvergence(team.id, it, change, "oracle diverged");
      if (change <= kOracleTolerance) {
        x = std::move(next);
        break;
      }
      if (it + 1 >= max_iterations) throw NonConvergence(team.id, it + 1, change, "oracle");
      for (auto& [rider, v] : x) v = 0.5 * v + 0.5 * next[rider];
    }

    for (const auto& [rider, v] : x) {
      out.values[rider] = v;
      out.team_of[rider] = team.id;
    }
    out.iterations_by_team[team.id] = it;
    out.residual_by_team[team.id] = change;
  }
  return out;
}

}  // namespace peloton
