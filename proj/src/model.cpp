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

#include "peloton/model.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace peloton {

Season::Season(std::vector<Team> teams, std::vector<Rider> riders,
               std::vector<Race> races, std::vector<RaceResult> results)
    : teams_(std::move(teams)),
      riders_(std::move(riders)),
      races_(std::move(races)),
      results_(std::move(results)) {
  std::stable_sort(teams_.begin(), teams_.end(),
                   [](const Team& a, const Team& b) { return a.id < b.id; });
  std::stable_sort(riders_.begin(), riders_.end(), [](const Rider& a, const Rider& b) {
    return std::tie(a.id, a.team) < std::tie(b.id, b.team);
  });
  std::stable_sort(races_.begin(), races_.end(),
                   [](const Race& a, const Race& b) { return a.id < b.id; });
  // Points and days break ties between duplicate rows so the order stays
  // canonical even for seasons that fail validation.
  std::stable_sort(results_.begin(), results_.end(),
                   [](const RaceResult& a, const RaceResult& b) {
                     return std::tie(a.team, a.race, a.rider, a.points, a.days) <
                            std::tie(b.team, b.race, b.rider, b.points, b.days);
                   });
}

std::vector<RiderId> Season::roster(const TeamId& team) const {
  std::vector<RiderId> out;
  for (const auto& r : riders_) {
    if (r.team == team && (out.empty() || out.back() != r.id)) out.push_back(r.id);
  }
  return out;
}

std::pair<std::size_t, std::size_t> Season::team_result_range(const TeamId& team) const {
  auto lo = std::partition_point(results_.begin(), results_.end(),
                                 [&](const RaceResult& r) { return r.team < team; });
  auto hi = std::partition_point(lo, results_.end(),
                                 [&](const RaceResult& r) { return r.team == team; });
  return {static_cast<std::size_t>(lo - results_.begin()),
          static_cast<std::size_t>(hi - results_.begin())};
}

const Team* Season::find_team(const TeamId& id) const {
  auto it = std::lower_bound(teams_.begin(), teams_.end(), id,
                             [](const Team& t, const TeamId& key) { return t.id < key; });
  return (it != teams_.end() && it->id == id) ? &*it : nullptr;
}

const Rider* Season::find_rider(const RiderId& id) const {
  auto it = std::lower_bound(riders_.begin(), riders_.end(), id,
                             [](const Rider& r, const RiderId& key) { return r.id < key; });
  return (it != riders_.end() && it->id == id) ? &*it : nullptr;
}

AggregateMap aggregate(const Season& season) {
  AggregateMap out;
  for (const auto& res : season.results()) {
    auto& agg = out[{res.race, res.team}];
    agg.race = res.race;
    agg.team = res.team;
    agg.team_points += res.points;
    agg.team_days += res.days;
    agg.weights[res.rider] = res.points;
  }
  for (auto& [key, agg] : out) {
    for (auto& [rider, w] : agg.weights) {
      w = agg.team_points > 0.0 ? w / agg.team_points : 0.0;
    }
  }
  return out;
}

SeasonTotals season_totals(const Season& season) {
  SeasonTotals totals;
  for (const auto& res : season.results()) {
    totals.rider_points[res.rider] += res.points;
    totals.team_points[res.team] += res.points;
    totals.total_days += res.days;
  }
  for (const auto& [team, points] : totals.team_points) totals.grand_total += points;

  std::set<RiderId> riders;
  for (const auto& r : season.riders()) riders.insert(r.id);
  for (const auto& res : season.results()) riders.insert(res.rider);
  totals.rider_count = riders.size();

  std::set<RaceId> races;
  for (const auto& r : season.races()) races.insert(r.id);
  for (const auto& res : season.results()) races.insert(res.race);
  totals.race_count = races.size();
  return totals;
}

}  // namespace peloton
