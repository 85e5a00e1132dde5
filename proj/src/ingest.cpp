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

#include "peloton/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "peloton/csv.hpp"

namespace peloton {

namespace fs = std::filesystem;

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptyId: return "empty_id";
    case ViolationKind::DuplicateId: return "duplicate_id";
    case ViolationKind::RiderInTwoTeams: return "rider_in_two_teams";
    case ViolationKind::DuplicateResult: return "duplicate_result";
    case ViolationKind::UnknownTeam: return "unknown_team";
    case ViolationKind::UnknownRider: return "unknown_rider";
    case ViolationKind::UnknownRace: return "unknown_race";
    case ViolationKind::NegativeValue: return "negative_value";
    case ViolationKind::PointsWithoutStart: return "points_without_start";
  }
  return "unknown";
}

std::vector<Violation> validate(const Season& season) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind kind, std::string entity, std::string message) {
    out.push_back({kind, std::move(entity), std::move(message)});
  };

  std::set<TeamId> teams;
  for (const auto& t : season.teams()) {
    if (t.id.empty()) add(ViolationKind::EmptyId, "team", "team id must be non-empty");
    if (!teams.insert(t.id).second) {
      add(ViolationKind::DuplicateId, t.id.str(), "team id listed more than once");
    }
  }
  std::set<RaceId> races;
  for (const auto& r : season.races()) {
    if (r.id.empty()) add(ViolationKind::EmptyId, "race", "race id must be non-empty");
    if (!races.insert(r.id).second) {
      add(ViolationKind::DuplicateId, r.id.str(), "race id listed more than once");
    }
  }

  std::map<RiderId, std::set<TeamId>> rider_teams;
  for (const auto& r : season.riders()) {
    if (r.id.empty()) add(ViolationKind::EmptyId, "rider", "rider id must be non-empty");
    if (!teams.contains(r.team)) {
      add(ViolationKind::UnknownTeam, r.id.str() + "@" + r.team.str(),
          "roster entry references an unknown team");
    }
    rider_teams[r.id].insert(r.team);
  }
  for (const auto& [rider, ts] : rider_teams) {
    if (ts.size() > 1) {
      std::string names;
      for (const auto& t : ts) names += (names.empty() ? "" : ",") + t.str();
      add(ViolationKind::RiderInTwoTeams, rider.str(),
          "rider appears in the rosters of teams " + names);
    }
  }

  std::map<std::pair<RaceId, RiderId>, int> seen;
  for (const auto& res : season.results()) {
    const std::string key = res.race.str() + "/" + res.rider.str();
    if (res.race.empty() || res.rider.empty() || res.team.empty()) {
      add(ViolationKind::EmptyId, key, "result ids must be non-empty");
    }
    if (++seen[{res.race, res.rider}] == 2) {
      add(ViolationKind::DuplicateResult, key, "more than one result for (race, rider)");
    }
    if (!teams.contains(res.team)) {
      add(ViolationKind::UnknownTeam, key + "@" + res.team.str(),
          "result references an unknown team");
    }
    if (!races.contains(res.race)) {
      add(ViolationKind::UnknownRace, key, "result references an unknown race");
    }
    auto it = rider_teams.find(res.rider);
    if (it == rider_teams.end()) {
      add(ViolationKind::UnknownRider, key, "result references a rider with no roster entry");
    } else if (!it->second.contains(res.team)) {
      add(ViolationKind::RiderInTwoTeams, key + "@" + res.team.str(),
          "rider scored for a team other than the roster team");
    }
    if (!(res.points >= 0.0) || !(res.days >= 0.0) || !std::isfinite(res.points) ||
        !std::isfinite(res.days)) {
      add(ViolationKind::NegativeValue, key, "points and days must be finite and >= 0");
    } else if (res.points > 0.0 && res.days <= 0.0) {
      add(ViolationKind::PointsWithoutStart, key, "points scored without starting");
    }
  }
  return out;
}

namespace {

csv::Table read_table(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IngestError(IngestErrorKind::MissingFile, "missing file: " + path.string());
  }
  try {
    return csv::parse(in);
  } catch (const csv::ParseError& e) {
    throw IngestError(IngestErrorKind::MalformedRow, path.filename().string() + ":" +
                                                         std::to_string(e.line()) + ": " +
                                                         e.what());
  }
}

[[noreturn]] void malformed(const fs::path& file, std::size_t line, const std::string& why) {
  throw IngestError(IngestErrorKind::MalformedRow,
                    file.filename().string() + ":" + std::to_string(line) + ": " + why);
}

// Resolves required and optional columns, warning on unknown ones.
class Columns {
 public:
  Columns(const csv::Table& table, const fs::path& file, std::vector<std::string> required,
          std::vector<std::string> optional, std::vector<std::string>& warnings)
      : file_(file) {
    if (table.header.empty()) malformed(file, 1, "missing header row");
    for (const auto& name : required) {
      auto idx = table.column(name);
      if (!idx) malformed(file, 1, "missing required column '" + name + "'");
      index_[name] = *idx;
    }
    for (const auto& name : optional) {
      if (auto idx = table.column(name)) index_[name] = *idx;
    }
    for (const auto& h : table.header) {
      if (!index_.contains(h)) {
        warnings.push_back(file.filename().string() + ": ignoring unknown column '" + h + "'");
      }
    }
  }

  bool has(const std::string& name) const { return index_.contains(name); }

  std::string get(const csv::Row& row, const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end() || it->second >= row.fields.size()) return {};
    return row.fields[it->second];
  }

  std::string required(const csv::Row& row, const std::string& name) const {
    std::string v = get(row, name);
    if (v.empty()) malformed(file_, row.line, "empty value in column '" + name + "'");
    return v;
  }

  double number(const csv::Row& row, const std::string& name) const {
    auto v = csv::parse_number(get(row, name));
    if (!v) malformed(file_, row.line, "column '" + name + "' is not a number");
    if (*v < 0.0) malformed(file_, row.line, "column '" + name + "' is negative");
    return *v;
  }

 private:
  fs::path file_;
  std::map<std::string, std::size_t> index_;
};

bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  int month = std::stoi(s.substr(5, 2));
  int day = std::stoi(s.substr(8, 2));
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  for (char c : s + ";") {
    if (c == ';' || c == '|') {
      auto b = item.find_first_not_of(" \t");
      if (b != std::string::npos) out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  return out;
}

std::vector<Race> races_from_results(const std::vector<Race>& known,
                                     const std::vector<RaceResult>& results) {
  std::set<RaceId> used;
  for (const auto& r : results) used.insert(r.race);
  std::vector<Race> out;
  for (const auto& r : known) {
    if (used.contains(r.id)) out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<TransferDirective> load_directives(const fs::path& path) {
  std::vector<std::string> warnings;
  auto table = read_table(path);
  std::vector<TransferDirective> out;
  if (table.header.empty() && table.rows.empty()) return out;
  Columns cols(table, path, {"rider_id", "rule"}, {"param1", "param2", "note"}, warnings);

  std::set<RiderId> seen;
  for (const auto& row : table.rows) {
    TransferDirective d;
    d.rider = RiderId(cols.required(row, "rider_id"));
    const std::string rule = cols.required(row, "rule");
    const std::string p1 = cols.get(row, "param1");
    const std::string p2 = cols.get(row, "param2");
    d.note = cols.get(row, "note");
    if (rule == "exclude_rider") {
      d.rule = TransferRule::ExcludeRider;
    } else if (rule == "restrict_after_date") {
      d.rule = TransferRule::RestrictAfterDate;
      if (!is_iso_date(p1)) malformed(path, row.line, "restrict_after_date needs an ISO date");
      d.date = p1;
    } else if (rule == "exclude_races") {
      d.rule = TransferRule::ExcludeRaces;
      for (const auto& id : split_list(p1 + ";" + p2)) d.races.emplace_back(id);
      if (d.races.empty()) malformed(path, row.line, "exclude_races needs at least one race");
    } else if (rule == "keep_team") {
      d.rule = TransferRule::KeepTeam;
      if (!p1.empty()) d.team = TeamId(p1);
    } else {
      malformed(path, row.line, "unknown rule '" + rule + "'");
    }
    if (!seen.insert(d.rider).second) {
      throw IngestError(IngestErrorKind::ConflictingDirective,
                        "rider " + d.rider.str() + " has more than one directive");
    }
    out.push_back(std::move(d));
  }
  return out;
}

Season apply_directives(const Season& raw, const std::vector<TransferDirective>& directives,
                        IngestReport& report) {
  std::vector<Rider> riders = raw.riders();
  std::vector<RaceResult> results = raw.results();

  std::set<RiderId> seen;
  for (const auto& d : directives) {
    if (!seen.insert(d.rider).second) {
      throw IngestError(IngestErrorKind::ConflictingDirective,
                        "rider " + d.rider.str() + " has more than one directive");
    }
    const bool on_roster = std::any_of(riders.begin(), riders.end(),
                                       [&](const Rider& r) { return r.id == d.rider; });
    const bool has_results = std::any_of(results.begin(), results.end(),
                                         [&](const RaceResult& r) { return r.rider == d.rider; });
    if (!on_roster && !has_results) {
      report.warnings.push_back("directive for rider " + d.rider.str() +
                                " matches no data; ignored");
      continue;
    }

    auto drop_results = [&](auto&& pred) {
      auto it = std::remove_if(results.begin(), results.end(), [&](const RaceResult& r) {
        return r.rider == d.rider && pred(r);
      });
      report.dropped_results += static_cast<std::size_t>(results.end() - it);
      results.erase(it, results.end());
    };

    switch (d.rule) {
      case TransferRule::ExcludeRider: {
        drop_results([](const RaceResult&) { return true; });
        std::erase_if(riders, [&](const Rider& r) { return r.id == d.rider; });
        break;
      }
      case TransferRule::RestrictAfterDate: {
        bool any_dated = false;
        bool any_undated = false;
        for (const auto& r : results) {
          if (r.rider != d.rider) continue;
          (r.date && !r.date->empty() ? any_dated : any_undated) = true;
        }
        if (!any_dated) {
          report.warnings.push_back("restrict_after_date for rider " + d.rider.str() +
                                    ": results carry no dates; keeping all results");
          break;
        }
        if (any_undated) {
          report.warnings.push_back("restrict_after_date for rider " + d.rider.str() +
                                    ": undated results kept");
        }
        drop_results([&](const RaceResult& r) {
          return r.date && !r.date->empty() && *r.date < d.date;
        });
        break;
      }
      case TransferRule::ExcludeRaces: {
        std::set<RaceId> excluded(d.races.begin(), d.races.end());
        drop_results([&](const RaceResult& r) { return excluded.contains(r.race); });
        break;
      }
      case TransferRule::KeepTeam: {
        std::map<TeamId, double> days;
        for (const auto& r : riders) {
          if (r.id == d.rider) days.try_emplace(r.team, 0.0);
        }
        for (const auto& r : results) {
          if (r.rider == d.rider) days[r.team] += r.days;
        }
        TeamId keep;
        if (d.team) {
          if (!days.contains(*d.team)) {
            throw IngestError(IngestErrorKind::ConflictingDirective,
                              "keep_team for rider " + d.rider.str() + " names team " +
                                  d.team->str() + " the rider never rode for");
          }
          keep = *d.team;
        } else {
          // Most race days wins; the map iterates in id order so the
          // smallest id wins a tie.
          double best = -1.0;
          for (const auto& [team, n] : days) {
            if (n > best) {
              best = n;
              keep = team;
            }
          }
          std::size_t ties = std::count_if(days.begin(), days.end(),
                                           [&](const auto& kv) { return kv.second == best; });
          if (ties > 1) {
            report.warnings.push_back("keep_team for rider " + d.rider.str() +
                                      ": tie on race days, keeping " + keep.str());
          }
        }
        drop_results([&](const RaceResult& r) { return r.team != keep; });
        std::string name;
        for (const auto& r : riders) {
          if (r.id == d.rider && (name.empty() || r.team == keep)) name = r.name;
        }
        std::erase_if(riders, [&](const Rider& r) { return r.id == d.rider; });
        riders.push_back({d.rider, name, keep});
        break;
      }
    }
    ++report.directives_applied;
  }

  auto races = races_from_results(raw.races(), results);
  return Season(raw.teams(), std::move(riders), std::move(races), std::move(results));
}

LoadedSeason load_season(const fs::path& data_dir, const std::optional<fs::path>& directives) {
  IngestReport report;
  const fs::path teams_file = data_dir / "teams.csv";
  const fs::path riders_file = data_dir / "riders.csv";
  const fs::path results_file = data_dir / "results.csv";

  std::vector<Team> teams;
  {
    auto table = read_table(teams_file);
    Columns cols(table, teams_file, {"team_id", "name", "category"}, {}, report.warnings);
    std::set<TeamId> ids;
    for (const auto& row : table.rows) {
      Team t{TeamId(cols.required(row, "team_id")), cols.get(row, "name"),
             cols.required(row, "category")};
      if (t.category != "WT" && t.category != "PT") {
        malformed(teams_file, row.line, "category must be WT or PT");
      }
      if (!ids.insert(t.id).second) malformed(teams_file, row.line, "duplicate team_id");
      teams.push_back(std::move(t));
    }
  }

  std::vector<Rider> riders;
  {
    auto table = read_table(riders_file);
    Columns cols(table, riders_file, {"rider_id", "name", "team_id"}, {}, report.warnings);
    std::set<std::pair<RiderId, TeamId>> ids;
    for (const auto& row : table.rows) {
      Rider r{RiderId(cols.required(row, "rider_id")), cols.get(row, "name"),
              TeamId(cols.required(row, "team_id"))};
      if (!ids.insert({r.id, r.team}).second) {
        malformed(riders_file, row.line, "duplicate (rider_id, team_id)");
      }
      riders.push_back(std::move(r));
    }
  }

  std::vector<Race> races;
  std::vector<RaceResult> results;
  {
    auto table = read_table(results_file);
    Columns cols(table, results_file,
                 {"race_id", "race_name", "category", "team_id", "rider_id", "points", "days"},
                 {"date"}, report.warnings);
    std::map<RaceId, std::size_t> race_index;
    for (const auto& row : table.rows) {
      RaceResult res;
      res.race = RaceId(cols.required(row, "race_id"));
      res.team = TeamId(cols.required(row, "team_id"));
      res.rider = RiderId(cols.required(row, "rider_id"));
      res.points = cols.number(row, "points");
      res.days = cols.number(row, "days");
      if (res.points > 0.0 && res.days <= 0.0) {
        malformed(results_file, row.line, "points without start");
      }
      if (cols.has("date")) {
        std::string date = cols.get(row, "date");
        if (!date.empty() && !is_iso_date(date)) {
          malformed(results_file, row.line, "date must be yyyy-mm-dd");
        }
        if (!date.empty()) res.date = std::move(date);
      }
      Race race{res.race, cols.get(row, "race_name"), cols.get(row, "category")};
      auto [it, inserted] = race_index.try_emplace(race.id, races.size());
      if (inserted) {
        races.push_back(std::move(race));
      } else if (races[it->second].name != race.name ||
                 races[it->second].category != race.category) {
        report.warnings.push_back("results.csv:" + std::to_string(row.line) + ": race " +
                                  race.id.str() + " has inconsistent name or category");
      }
      results.push_back(std::move(res));
    }
  }
  report.results_loaded = results.size();

  Season raw(std::move(teams), std::move(riders), std::move(races), std::move(results));
  std::vector<TransferDirective> dirs;
  if (directives) dirs = load_directives(*directives);
  Season season = apply_directives(raw, dirs, report);

  auto violations = validate(season);
  if (!violations.empty()) {
    auto has = [&](ViolationKind k) {
      return std::any_of(violations.begin(), violations.end(),
                         [&](const Violation& v) { return v.kind == k; });
    };
    IngestErrorKind kind = IngestErrorKind::InvalidSeason;
    if (has(ViolationKind::DuplicateResult)) {
      kind = IngestErrorKind::DuplicateResult;
    } else if (has(ViolationKind::UnknownTeam)) {
      kind = IngestErrorKind::UnknownTeam;
    } else if (has(ViolationKind::UnknownRider)) {
      kind = IngestErrorKind::UnknownRider;
    }
    std::ostringstream msg;
    msg << "season failed validation (" << violations.size() << " violation"
        << (violations.size() == 1 ? "" : "s") << ")";
    for (const auto& v : violations) {
      msg << "\n  " << to_string(v.kind) << " " << v.entity << ": " << v.message;
    }
    throw IngestError(kind, msg.str(), std::move(violations));
  }

  report.results_kept = season.results().size();
  report.races_loaded = season.races().size();
  report.totals = season_totals(season);
  report.riders_loaded = report.totals.rider_count;
  return {std::move(season), std::move(report)};
}

void write_season(const Season& season, const fs::path& data_dir) {
  fs::create_directories(data_dir);
  auto open = [&](const char* name) {
    std::ofstream out(data_dir / name, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IngestError(IngestErrorKind::MissingFile,
                        "cannot write " + (data_dir / name).string());
    }
    return out;
  };

  {
    auto out = open("teams.csv");
    out << "team_id,name,category\n";
    for (const auto& t : season.teams()) {
      out << csv::join({t.id.str(), t.name, t.category}) << '\n';
    }
  }
  {
    auto out = open("riders.csv");
    out << "rider_id,name,team_id\n";
    for (const auto& r : season.riders()) {
      out << csv::join({r.id.str(), r.name, r.team.str()}) << '\n';
    }
  }
  {
    const bool dated = std::any_of(season.results().begin(), season.results().end(),
                                   [](const RaceResult& r) { return r.date.has_value(); });
    std::map<RaceId, const Race*> race_of;
    for (const auto& r : season.races()) race_of[r.id] = &r;
    auto out = open("results.csv");
    out << "race_id,race_name,category,team_id,rider_id,points,days" << (dated ? ",date" : "")
        << '\n';
    for (const auto& res : season.results()) {
      const Race* race = race_of.contains(res.race) ? race_of[res.race] : nullptr;
      std::vector<std::string> fields{res.race.str(),
                                      race ? race->name : std::string{},
                                      race ? race->category : std::string{},
                                      res.team.str(),
                                      res.rider.str(),
                                      csv::shortest(res.points),
                                      csv::shortest(res.days)};
      if (dated) fields.push_back(res.date.value_or(""));
      out << csv::join(fields) << '\n';
    }
  }
}

}  // namespace peloton
