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

#ifndef PELOTON_INGEST_HPP
#define PELOTON_INGEST_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "peloton/model.hpp"

namespace peloton {

/// How to resolve a rider who raced for more than one squad.
enum class TransferRule {
  ExcludeRider,       // trainees / development riders: drop entirely
  RestrictAfterDate,  // promoted riders: keep results dated on or after param1
  ExcludeRaces,       // national-team events: drop the listed races
  KeepTeam,           // transfers: keep one team (param1, or most race days)
};

struct TransferDirective {
  RiderId rider;
  TransferRule rule = TransferRule::ExcludeRider;
  std::string date;                     // RestrictAfterDate
  std::vector<RaceId> races;            // ExcludeRaces
  std::optional<TeamId> team;           // KeepTeam; empty picks most days
  std::string note;
};

enum class ViolationKind {
  EmptyId,
  DuplicateId,
  RiderInTwoTeams,
  DuplicateResult,
  UnknownTeam,
  UnknownRider,
  UnknownRace,
  NegativeValue,
  PointsWithoutStart,
};

struct Violation {
  ViolationKind kind;
  std::string entity;   // the offending id(s)
  std::string message;  // names the invariant
};

std::string to_string(ViolationKind kind);

/// Returns every broken Season invariant; empty iff the season is valid.
std::vector<Violation> validate(const Season& season);

struct IngestReport {
  std::size_t riders_loaded = 0;
  std::size_t races_loaded = 0;
  std::size_t results_loaded = 0;  // rows read from results.csv
  std::size_t results_kept = 0;
  std::size_t directives_applied = 0;
  std::size_t dropped_results = 0;
  SeasonTotals totals;
  std::vector<std::string> warnings;
};

struct LoadedSeason {
  Season season;
  IngestReport report;
};

enum class IngestErrorKind {
  MissingFile,
  MalformedRow,
  DuplicateResult,
  UnknownTeam,
  UnknownRider,
  ConflictingDirective,
  InvalidSeason,
};

class IngestError : public std::runtime_error {
 public:
  IngestError(IngestErrorKind kind, const std::string& what,
              std::vector<Violation> violations = {})
      : std::runtime_error(what), kind_(kind), violations_(std::move(violations)) {}

  IngestErrorKind kind() const noexcept { return kind_; }
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  IngestErrorKind kind_;
  std::vector<Violation> violations_;
};

/// Reads teams.csv, riders.csv and results.csv from `data_dir`, applies the
/// optional directives file, and returns a season that passes validate().
LoadedSeason load_season(const std::filesystem::path& data_dir,
                         const std::optional<std::filesystem::path>& directives = std::nullopt);

/// Parses a directives file on its own.
std::vector<TransferDirective> load_directives(const std::filesystem::path& path);

/// Applies directives to a raw season. Returns the cleaned season and adds
/// the number of dropped results and any warnings to `report`.
Season apply_directives(const Season& raw, const std::vector<TransferDirective>& directives,
                        IngestReport& report);

/// Writes the three ingest files (and nothing else) into `data_dir`.
void write_season(const Season& season, const std::filesystem::path& data_dir);

}  // namespace peloton

#endif  // PELOTON_INGEST_HPP
