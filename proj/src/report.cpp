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

#include "peloton/report.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "peloton/csv.hpp"

namespace peloton {

using nlohmann::json;

std::string allocation_csv(const Allocation& allocation) {
  const Ranking ranking = rank(allocation);
  std::string out = "rider_id,team_id,value,rank\n";
  for (const auto& e : ranking.entries) {
    out += csv::join({e.rider.str(), e.team.str(), csv::fixed(e.value), std::to_string(e.rank)});
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "alpha,beta,rider_id,value,rank\n";
  for (const auto& cell : result.cells) {
    const std::string a = csv::fixed(cell.alpha);
    const std::string b = csv::fixed(cell.beta);
    for (const auto& r : cell.riders) {
      out += csv::join({a, b, r.rider.str(), csv::fixed(r.value), std::to_string(r.rank)});
      out += '\n';
    }
  }
  return out;
}

json to_json(const Config& config) {
  return {{"name", config.name},
          {"alpha", config.alpha},
          {"beta", config.beta},
          {"tolerance", config.tolerance},
          {"max_iterations", config.max_iterations}};
}

namespace {

json test_json(const std::optional<CorrelationTest>& t) {
  if (!t) return nullptr;
  return {{"coefficient", t->coefficient}, {"p_value", t->p_value}, {"significant", t->significant}};
}

}  // namespace

json to_json(const ComparisonReport& report) {
  json segments = json::array();
  for (const auto& s : report.segments) {
    segments.push_back({{"segment", to_string(s.segment)},
                        {"size", s.size},
                        {"points",
                         {{"pearson", test_json(s.pearson)},
                          {"kendall_tau_b", test_json(s.kendall)}}},
                        {"ranks",
                         {{"pearson", test_json(s.rank_pearson)},
                          {"kendall_tau_b", test_json(s.rank_kendall)}}},
                        {"degenerate", !s.pearson || !s.kendall}});
  }

  json transitions = {{"row_counts", report.transitions.row_counts},
                      {"counts", report.transitions.counts},
                      {"percent", report.transitions.percent}};

  json differences = json::array();
  for (const auto& d : report.differences) {
    differences.push_back({{"rider_id", d.rider.str()},
                           {"team_id", d.team.str()},
                           {"baseline_rank", d.baseline_rank},
                           {"other_rank", d.other_rank},
                           {"baseline_value", d.baseline_value},
                           {"other_value", d.other_value},
                           {"value_change", d.value_change},
                           {"rank_change", d.rank_change}});
  }

  return {{"baseline", to_json(report.baseline)},
          {"against", to_json(report.against)},
          {"quartile_rule", to_string(report.rule)},
          {"segments", segments},
          {"transition_matrix", transitions},
          {"differences", differences}};
}

json to_json(const SeasonTotals& totals) {
  json teams = json::object();
  for (const auto& [team, points] : totals.team_points) teams[team.str()] = points;
  return {{"riders", totals.rider_count},
          {"races", totals.race_count},
          {"points", totals.grand_total},
          {"days", totals.total_days},
          {"team_points", teams}};
}

std::string season_summary(const Season& season) {
  struct Row {
    std::set<RiderId> riders;
    std::set<RaceId> races;
    double points = 0.0;
    double days = 0.0;
  };
  std::map<TeamId, Row> rows;
  for (const auto& t : season.teams()) rows[t.id];
  for (const auto& r : season.riders()) rows[r.team].riders.insert(r.id);
  for (const auto& res : season.results()) {
    auto& row = rows[res.team];
    row.races.insert(res.race);
    row.points += res.points;
    row.days += res.days;
  }

  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-28s %-4s %7s %7s %14s %9s\n", "team", "name", "cat",
                "riders", "races", "points", "days");
  os << line;
  std::size_t team_races = 0;
  for (const auto& [id, row] : rows) {
    const Team* team = season.find_team(id);
    std::snprintf(line, sizeof line, "%-12s %-28s %-4s %7zu %7zu %14s %9s\n", id.str().c_str(),
                  team ? team->name.substr(0, 28).c_str() : "", team ? team->category.c_str() : "",
                  row.riders.size(), row.races.size(), csv::fixed(row.points, 2).c_str(),
                  csv::shortest(row.days).c_str());
    os << line;
    team_races += row.races.size();
  }
  const auto totals = season_totals(season);
  std::snprintf(line, sizeof line, "%-12s %-28s %-4s %7zu %7zu %14s %9s\n", "TOTAL", "", "",
                totals.rider_count, totals.race_count, csv::fixed(totals.grand_total, 2).c_str(),
                csv::shortest(totals.total_days).c_str());
  os << line;
  os << "teams " << rows.size() << ", team-race entries " << team_races << ", results "
     << season.results().size() << '\n';
  return os.str();
}

}  // namespace peloton
