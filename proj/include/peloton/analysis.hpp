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

#ifndef PELOTON_ANALYSIS_HPP
#define PELOTON_ANALYSIS_HPP

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "peloton/model.hpp"
#include "peloton/solver.hpp"

namespace peloton {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class EmptyAllocation : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};
class DegenerateSeries : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};
class RiderSetMismatch : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

/// Quartile k holds ranks in (B(k-1), B(k)] with B(k) = ceil(k*N/4) or
/// floor(k*N/4). Ceiling puts the short quartile at the bottom, floor at
/// the top.
enum class QuartileRule { Ceiling, Floor };

std::string to_string(QuartileRule rule);

/// Boundaries B(0) = 0 .. B(4) = n.
std::array<std::size_t, 5> quartile_bounds(std::size_t n, QuartileRule rule);

struct RankEntry {
  std::size_t rank = 0;  // 1-based
  RiderId rider;
  TeamId team;
  double value = 0.0;
};

struct Ranking {
  Config config;
  QuartileRule rule = QuartileRule::Ceiling;
  std::vector<RankEntry> entries;  // value descending, rider id ascending on ties
  std::map<RiderId, int> quartile; // 1..4
  std::map<RiderId, std::size_t> position;  // index into entries

  /// Throws std::out_of_range for riders not in the ranking.
  std::size_t rank_of(const RiderId& rider) const;
  const RankEntry& entry(const RiderId& rider) const;
};

Ranking rank(const Allocation& allocation, QuartileRule rule = QuartileRule::Ceiling);

/// Product-moment correlation. Throws DegenerateSeries on constant input
/// and std::invalid_argument on mismatched or too-short series.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Kendall tau-b with tie correction, O(n log n).
double kendall_tau_b(std::span<const double> xs, std::span<const double> ys);

struct CorrelationTest {
  double coefficient = 0.0;
  double p_value = 1.0;  // two-sided
  bool significant = false;
};

/// Pearson with a two-sided t-test (n - 2 degrees of freedom).
CorrelationTest pearson_test(std::span<const double> xs, std::span<const double> ys,
                             double level = 0.05);

/// Kendall tau-b with a two-sided normal approximation using the
/// tie-corrected variance of C - D.
CorrelationTest kendall_test(std::span<const double> xs, std::span<const double> ys,
                             double level = 0.05);

struct TransitionMatrix {
  /// percent[a][b]: share of baseline-quartile a riders landing in quartile
  /// b of the other ranking. Rows of empty quartiles are all zero.
  std::array<std::array<double, 4>, 4> percent{};
  std::array<std::array<std::size_t, 4>, 4> counts{};
  std::array<std::size_t, 4> row_counts{};
};

TransitionMatrix transition_matrix(const Ranking& baseline, const Ranking& other);

enum class Segment { Full, FirstHalf, SecondHalf, Q1, Q2, Q3, Q4 };

inline constexpr std::array<Segment, 7> kSegments{Segment::Full, Segment::FirstHalf,
                                                   Segment::SecondHalf, Segment::Q1,
                                                   Segment::Q2, Segment::Q3, Segment::Q4};

std::string to_string(Segment segment);

struct SegmentStats {
  Segment segment = Segment::Full;
  std::size_t size = 0;
  // On values; empty when degenerate.
  std::optional<CorrelationTest> pearson;
  std::optional<CorrelationTest> kendall;
  // On rank numbers.
  std::optional<CorrelationTest> rank_pearson;
  std::optional<CorrelationTest> rank_kendall;
};

struct DifferenceEntry {
  RiderId rider;
  TeamId team;
  std::size_t baseline_rank = 0;
  std::size_t other_rank = 0;
  double baseline_value = 0.0;
  double other_value = 0.0;
  double value_change = 0.0;   // other - baseline
  long rank_change = 0;        // other - baseline (negative moves up)
};

struct ComparisonReport {
  Config baseline;
  Config against;
  QuartileRule rule = QuartileRule::Ceiling;
  std::vector<SegmentStats> segments;  // in kSegments order
  TransitionMatrix transitions;
  std::vector<DifferenceEntry> differences;  // by baseline rank
};

/// Segments are taken on the baseline ranking; coefficients are computed on
/// allocation values, so ties stay ties.
ComparisonReport compare(const Allocation& baseline, const Allocation& other,
                         QuartileRule rule = QuartileRule::Ceiling);

}  // namespace peloton

#endif  // PELOTON_ANALYSIS_HPP
