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

#ifndef PELOTON_SWEEP_HPP
#define PELOTON_SWEEP_HPP

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "peloton/model.hpp"
#include "peloton/solver.hpp"

namespace peloton {

/// Cartesian alphas x betas plus any extra (alpha, beta) cells.
struct SweepGrid {
  std::vector<double> alphas;
  std::vector<double> betas;
  std::vector<std::pair<double, double>> extra;

  /// alpha in {0.1, ..., 1.0}, beta in {0, 0.1, ..., 1.0}, plus the presets.
  static SweepGrid standard();

  /// Adds the four named presets as extra cells.
  SweepGrid& with_presets();

  /// Sorted, de-duplicated cells. Throws std::invalid_argument when a list
  /// is empty or a value is out of range.
  std::vector<std::pair<double, double>> cells() const;
};

struct CellRider {
  RiderId rider;
  TeamId team;
  double value = 0.0;
  std::size_t rank = 0;
};

struct SweepCell {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<CellRider> riders;  // rank order
  std::map<TeamId, double> team_totals;
  std::map<TeamId, long> iterations;
};

struct SweepResult {
  SweepGrid grid;
  std::vector<SweepCell> cells;  // ascending (alpha, beta)
};

struct SweepOptions {
  Config base;         // tolerance and iteration limits; alpha, beta ignored
  unsigned jobs = 1;   // cells solved concurrently
  /// Seed each cell with the previous cell's solution. Forces sequential
  /// evaluation.
  bool warm_start = false;
};

/// Raised when one cell fails; carries the cell coordinates.
class SweepError : public SolverError {
 public:
  SweepError(double alpha, double beta, const std::string& what);
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  bool non_convergence = false;

 private:
  double alpha_;
  double beta_;
};

SweepResult run_sweep(const Season& season, const SweepGrid& grid,
                      const SweepOptions& options = {});

struct TrajectoryPoint {
  double alpha = 0.0;
  double beta = 0.0;
  double value = 0.0;
  std::size_t rank = 0;
};

/// One point per cell in (alpha, beta) order. Throws std::out_of_range for
/// an unknown rider.
std::vector<TrajectoryPoint> rider_trajectory(const SweepResult& result, const RiderId& rider);

}  // namespace peloton

#endif  // PELOTON_SWEEP_HPP
