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

// Machine-readable output formats. CSV numbers carry six decimals; JSON
// numbers are written at full precision.

#ifndef PELOTON_REPORT_HPP
#define PELOTON_REPORT_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "peloton/analysis.hpp"
#include "peloton/ingest.hpp"
#include "peloton/solver.hpp"
#include "peloton/sweep.hpp"

namespace peloton {

/// rider_id,team_id,value,rank in rank order.
std::string allocation_csv(const Allocation& allocation);

/// alpha,beta,rider_id,value,rank, cells in grid order, riders in rank order.
std::string sweep_csv(const SweepResult& result);

nlohmann::json to_json(const Config& config);
nlohmann::json to_json(const ComparisonReport& report);
nlohmann::json to_json(const SeasonTotals& totals);

/// Per-team and overall summary lines: riders, races, points, days.
std::string season_summary(const Season& season);

}  // namespace peloton

#endif  // PELOTON_REPORT_HPP
