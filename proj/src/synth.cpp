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

#include "peloton/synth.hpp"

#include <cmath>
#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace peloton {

namespace {

std::string numbered(const char* prefix, int value, int count) {
  const std::size_t width = std::max<std::size_t>(2, std::to_string(count).size());
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

double cents(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

void check_spec(const SynthSpec& spec) {
  if (spec.teams < 1 || spec.riders_per_team < 1 || spec.races < 1) {
    throw std::invalid_argument("synthetic season needs at least one team, rider and race");
  }
  if (!(spec.leader_fraction > 0.0 && spec.leader_fraction <= 1.0)) {
    throw std::invalid_argument("leader_fraction must lie in (0, 1]");
  }
  if (!(spec.points_scale > 0.0) || !std::isfinite(spec.points_scale)) {
    throw std::invalid_argument("points_scale must be positive");
  }
}

Season generate(const SynthSpec& spec) {
  check_spec(spec);
  SplitMix64 rng(spec.seed);

  std::vector<Team> teams;
  std::vector<Rider> riders;
  const int leaders = static_cast<int>(std::ceil(spec.leader_fraction * spec.riders_per_team));
  for (int t = 1; t <= spec.teams; ++t) {
    const std::string team_id = numbered("T", t, spec.teams);
    // Roughly the WorldTour / ProTeam mix of the top division.
    teams.push_back({TeamId(team_id), "Team " + team_id, t * 5 <= spec.teams * 4 ? "WT" : "PT"});
    for (int i = 1; i <= spec.riders_per_team; ++i) {
      const std::string rider_id = team_id + "-" + numbered("R", i, spec.riders_per_team);
      riders.push_back({RiderId(rider_id), "Rider " + rider_id, TeamId(team_id)});
    }
  }

  // Draw order per race: stage flag, stage length, then per team the entry
  // flag, then per rider the start flag, abandon flag and day count, and
  // the scoring flag and amount.
  std::vector<Race> races;
  std::vector<RaceResult> results;
  for (int r = 1; r <= spec.races; ++r) {
    const std::string race_id = numbered("RC", r, spec.races);
    const bool stage_race = rng.chance(0.3);
    const int length = stage_race ? 2 + static_cast<int>(rng.below(20)) : 1;
    races.push_back({RaceId(race_id), "Race " + race_id, stage_race ? "2.UWT" : "1.UWT"});
    const double race_scale = spec.points_scale * (stage_race ? 1.0 + length / 7.0 : 1.0);

    for (int t = 0; t < spec.teams; ++t) {
      if (!rng.chance(0.75)) continue;
      std::vector<int> starters;
      for (int i = 0; i < spec.riders_per_team; ++i) {
        if (rng.chance(0.5)) starters.push_back(i);
      }
      if (starters.empty()) starters.push_back(static_cast<int>(rng.below(spec.riders_per_team)));

      for (int i : starters) {
        double days = length;
        if (length > 1 && rng.chance(0.15)) days = 1.0 + static_cast<double>(rng.below(length));
        const bool leader = i < leaders;
        double points = 0.0;
        if (leader) {
          if (rng.chance(0.6)) {
            const double u = rng.uniform();
            points = cents(race_scale * (0.05 + 0.95 * u * u));
          }
        } else if (rng.chance(0.2)) {
          points = cents(race_scale * 0.15 * rng.uniform());
        }
        const auto& rider = riders[static_cast<std::size_t>(t * spec.riders_per_team + i)];
        results.push_back({RaceId(race_id), rider.team, rider.id, points, days, std::nullopt});
      }
    }
  }
  return Season(std::move(teams), std::move(riders), std::move(races), std::move(results));
}

}  // namespace peloton
