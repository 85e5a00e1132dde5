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

#ifndef PELOTON_MODEL_HPP
#define PELOTON_MODEL_HPP

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace peloton {

/// Opaque string identifier, distinct per namespace via the tag type.
template <typename Tag>
class Id {
 public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;

 private:
  std::string value_;
};

struct RiderTag {};
struct TeamTag {};
struct RaceTag {};

using RiderId = Id<RiderTag>;
using TeamId = Id<TeamTag>;
using RaceId = Id<RaceTag>;

struct Team {
  TeamId id;
  std::string name;
  std::string category;  // WT or PT
};

/// Roster entry. A cleaned season has exactly one entry per rider.
struct Rider {
  RiderId id;
  std::string name;
  TeamId team;
};

struct Race {
  RaceId id;
  std::string name;
  std::string category;
};

/// One rider's points and days started in one race, riding for one team.
struct RaceResult {
  RaceId race;
  TeamId team;
  RiderId rider;
  double points = 0.0;
  double days = 0.0;
  std::optional<std::string> date;  // ISO yyyy-mm-dd, only used by ingest
};

/// A season (races, teams, riders) with all per-race results.
///
/// Construction sorts every collection into canonical id order, so all
/// aggregations are independent of the order the input was supplied in.
/// The constructor does not validate; see validate() in ingest.hpp.
class Season {
 public:
  Season() = default;
  Season(std::vector<Team> teams, std::vector<Rider> riders,
         std::vector<Race> races, std::vector<RaceResult> results);

  const std::vector<Team>& teams() const noexcept { return teams_; }
  const std::vector<Rider>& riders() const noexcept { return riders_; }
  const std::vector<Race>& races() const noexcept { return races_; }
  /// Sorted by (team, race, rider).
  const std::vector<RaceResult>& results() const noexcept { return results_; }

  /// Roster N(t): riders whose roster entry names this team, sorted by id.
  std::vector<RiderId> roster(const TeamId& team) const;

  /// Results of team t, contiguous in results().
  std::pair<std::size_t, std::size_t> team_result_range(const TeamId& team) const;

  const Team* find_team(const TeamId& id) const;
  const Rider* find_rider(const RiderId& id) const;

 private:
  std::vector<Team> teams_;
  std::vector<Rider> riders_;
  std::vector<Race> races_;
  std::vector<RaceResult> results_;
};

/// Per (race, team) totals and race-specific weights w_i = p_i / p(r,t).
struct RaceTeamAggregate {
  RaceId race;
  TeamId team;
  double team_points = 0.0;
  double team_days = 0.0;
  /// Zero for every rider when team_points == 0.
  std::map<RiderId, double> weights;
};

struct SeasonTotals {
  std::map<RiderId, double> rider_points;
  std::map<TeamId, double> team_points;
  double grand_total = 0.0;
  std::size_t rider_count = 0;
  std::size_t race_count = 0;
  double total_days = 0.0;
};

using AggregateMap = std::map<std::pair<RaceId, TeamId>, RaceTeamAggregate>;

AggregateMap aggregate(const Season& season);

SeasonTotals season_totals(const Season& season);

}  // namespace peloton

template <typename Tag>
struct std::hash<peloton::Id<Tag>> {
  std::size_t operator()(const peloton::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

#endif  // PELOTON_MODEL_HPP
