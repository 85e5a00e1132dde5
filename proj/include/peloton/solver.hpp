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

// Within-team point allocation.
//
// Each rider's value mixes three ways of splitting a team's race points:
//
//   x_i = a*b*P_i
//       + sum_r [ a*(1-b) * d_i/d  +  (1-a) * d_i w_i x_i / sum_j d_j w_j x_j ] * p(r)
//
// where P_i are the rider's own points, d_i the days started, p(r) the
// team's points in race r and w_i = p_i / p(r) the rider's share of them.
// The last term couples teammates, so x is the fixed point of the
// right-hand side. a = 1, b = 1 reproduces the raw points; a = 1, b = 0
// splits every race's points in proportion to days started.

#ifndef PELOTON_SOLVER_HPP
#define PELOTON_SOLVER_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "peloton/model.hpp"

namespace peloton {

struct Config {
  double alpha = 1.0;
  double beta = 1.0;
  double tolerance = 1e-10;
  long max_iterations = 100000;
  std::string name;

  static Config uci() { return {1.0, 1.0, 1e-10, 100000, "UCI"}; }
  static Config part() { return {1.0, 0.0, 1e-10, 100000, "PART"}; }
  static Config cosc() { return {0.1, 1.0, 1e-10, 100000, "CoSc"}; }
  static Config ref() { return {1.0 / 3.0, 0.5, 1e-10, 100000, "REF"}; }
};

/// Looks up uci, part, cosc or ref (case-insensitive).
std::optional<Config> preset(std::string_view name);

/// All four presets in the order UCI, PART, CoSc, REF.
std::vector<Config> presets();

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public SolverError {
 public:
  using SolverError::SolverError;
};

class NonConvergence : public SolverError {
 public:
  NonConvergence(TeamId team, long iterations, double residual, const std::string& detail = {});
  const TeamId& team() const noexcept { return team_; }
  long iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  TeamId team_;
  long iterations_;
  double residual_;
};

/// Throws InvalidConfig unless alpha in (0,1], beta in [0,1], tolerance > 0
/// and max_iterations >= 1.
void check_config(const Config& config);

struct Allocation {
  Config config;
  std::map<RiderId, double> values;
  std::map<RiderId, TeamId> team_of;
  std::map<TeamId, long> iterations_by_team;
  std::map<TeamId, double> residual_by_team;

  double value(const RiderId& rider) const;
  double total() const;
  double team_total(const TeamId& team) const;
};

enum class WeightMode {
  /// w_i = p_i / p(r,t); the reference term uses the rider's own points.
  Points,
  /// No points weighting anywhere: w_i = 1 in the shares and the
  /// reference term falls back to the days-proportional split.
  Uniform,
};

struct SolveOptions {
  /// Worker threads used across teams. Output does not depend on it.
  unsigned jobs = 1;
  /// Optional starting point, e.g. a neighbouring configuration's solution.
  const std::map<RiderId, double>* initial = nullptr;
};

/// One team's race entries, indexed for the fixed-point map.
struct TeamProblem {
  struct Entry {
    std::size_t rider;  // index into riders
    double points;
    double days;
  };
  struct RaceBlock {
    RaceId race;
    double team_points = 0.0;
    double team_days = 0.0;
    std::vector<Entry> entries;
  };

  TeamId team;
  std::vector<RiderId> riders;       // roster, sorted by id
  std::vector<RaceBlock> races;      // races with team_points > 0 only
  std::vector<double> own_points;    // P_i
  std::vector<double> participation; // sum_r d_i/d * p(r)
  double total_points = 0.0;         // P(t)
};

TeamProblem build_team_problem(const Season& season, const TeamId& team);

/// Per-entry shares d_i w_i x_i / sum_j d_j w_j x_j for one race. Returns
/// all zeros if the denominator is not positive.
std::vector<double> coscore_shares(const TeamProblem::RaceBlock& race, std::span<const double> x,
                                   WeightMode mode = WeightMode::Points);

/// One application of the right-hand side to x.
std::vector<double> apply_map(const TeamProblem& problem, const Config& config,
                              std::span<const double> x, WeightMode mode = WeightMode::Points);

Allocation solve(const Season& season, const Config& config, const SolveOptions& options = {});

/// Same map with the points weights removed (see WeightMode::Uniform).
Allocation solve_unweighted(const Season& season, const Config& config,
                            const SolveOptions& options = {});

/// Largest relative change |F(x)_i - x_i| / max(x_i, 1) over all riders.
double fixed_point_residual(const Season& season, const Allocation& allocation,
                            WeightMode mode = WeightMode::Points);

struct ComponentValues {
  double uci = 0.0;
  double participation = 0.0;
  double coscore = 0.0;
};

/// Corner distributions of the configuration simplex. The CoScore corner is
/// evaluated at alpha = 0.1, beta = 1 because alpha = 0 is not defined.
std::map<RiderId, ComponentValues> component_values(const Season& season);

/// Independent cross-check of solve(): always-damped substitution from a
/// uniform start, tolerance 1e-12. Intended for small seasons.
Allocation oracle_solve(const Season& season, const Config& config);

}  // namespace peloton

#endif  // PELOTON_SOLVER_HPP
