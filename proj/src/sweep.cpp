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

#include "peloton/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "peloton/analysis.hpp"

namespace peloton {

namespace {

std::string cell_message(double alpha, double beta, const std::string& what) {
  std::ostringstream os;
  os << "cell (alpha=" << alpha << ", beta=" << beta << "): " << what;
  return os.str();
}

SweepCell summarize(double alpha, double beta, const Allocation& alloc) {
  SweepCell cell;
  cell.alpha = alpha;
  cell.beta = beta;
  const Ranking ranking = rank(alloc);
  cell.riders.reserve(ranking.entries.size());
  for (const auto& e : ranking.entries) {
    cell.riders.push_back({e.rider, e.team, e.value, e.rank});
  }
  for (const auto& [rider, team] : alloc.team_of) cell.team_totals[team] += alloc.values.at(rider);
  cell.iterations = alloc.iterations_by_team;
  return cell;
}

}  // namespace

SweepError::SweepError(double alpha, double beta, const std::string& what)
    : SolverError(cell_message(alpha, beta, what)), alpha_(alpha), beta_(beta) {}

SweepGrid SweepGrid::standard() {
  SweepGrid g;
  for (int k = 1; k <= 10; ++k) g.alphas.push_back(k / 10.0);
  for (int k = 0; k <= 10; ++k) g.betas.push_back(k / 10.0);
  g.with_presets();
  return g;
}

SweepGrid& SweepGrid::with_presets() {
  for (const auto& c : presets()) extra.emplace_back(c.alpha, c.beta);
  return *this;
}

std::vector<std::pair<double, double>> SweepGrid::cells() const {
  if (alphas.empty() || betas.empty()) {
    throw std::invalid_argument("sweep grid needs at least one alpha and one beta");
  }
  std::vector<std::pair<double, double>> out;
  for (double a : alphas) {
    for (double b : betas) out.emplace_back(a, b);
  }
  out.insert(out.end(), extra.begin(), extra.end());
  for (const auto& [a, b] : out) {
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("grid alpha outside (0, 1]");
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("grid beta outside [0, 1]");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SweepResult run_sweep(const Season& season, const SweepGrid& grid,
                      const SweepOptions& options) {
  const auto coords = grid.cells();
  SweepResult result;
  result.grid = grid;
  result.cells.resize(coords.size());
  std::vector<std::exception_ptr> errors(coords.size());

  auto solve_cell = [&](std::size_t i, const std::map<RiderId, double>* initial) {
    Config config = options.base;
    config.alpha = coords[i].first;
    config.beta = coords[i].second;
    config.name.clear();
    SolveOptions so;
    so.initial = initial;
    Allocation alloc = solve(season, config, so);
    result.cells[i] = summarize(config.alpha, config.beta, alloc);
    return alloc;
  };
  auto wrap = [&](std::size_t i, auto&& fn) {
    try {
      fn();
    } catch (const NonConvergence& e) {
      SweepError err(coords[i].first, coords[i].second, e.what());
      err.non_convergence = true;
      errors[i] = std::make_exception_ptr(err);
    } catch (const std::exception& e) {
      errors[i] = std::make_exception_ptr(SweepError(coords[i].first, coords[i].second, e.what()));
    }
  };

  if (options.warm_start) {
    std::map<RiderId, double> previous;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      wrap(i, [&] {
        auto alloc = solve_cell(i, previous.empty() ? nullptr : &previous);
        previous = std::move(alloc.values);
      });
      if (errors[i]) break;
    }
  } else {
    const std::size_t jobs = std::clamp<std::size_t>(options.jobs == 0 ? 1 : options.jobs, 1,
                                                     std::max<std::size_t>(coords.size(), 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < coords.size(); i = next++) {
        wrap(i, [&] { solve_cell(i, nullptr); });
      }
    };
    if (jobs == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

std::vector<TrajectoryPoint> rider_trajectory(const SweepResult& result, const RiderId& rider) {
  std::vector<TrajectoryPoint> out;
  out.reserve(result.cells.size());
  for (const auto& cell : result.cells) {
    auto it = std::find_if(cell.riders.begin(), cell.riders.end(),
                           [&](const CellRider& r) { return r.rider == rider; });
    if (it == cell.riders.end()) throw std::out_of_range("unknown rider: " + rider.str());
    out.push_back({cell.alpha, cell.beta, it->value, it->rank});
  }
  return out;
}

}  // namespace peloton
