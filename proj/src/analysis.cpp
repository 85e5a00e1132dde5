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

#include "peloton/analysis.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace peloton {

std::string to_string(QuartileRule rule) {
  return rule == QuartileRule::Ceiling ? "ceiling" : "floor";
}

std::string to_string(Segment segment) {
  switch (segment) {
    case Segment::Full: return "full";
    case Segment::FirstHalf: return "first_half";
    case Segment::SecondHalf: return "second_half";
    case Segment::Q1: return "q1";
    case Segment::Q2: return "q2";
    case Segment::Q3: return "q3";
    case Segment::Q4: return "q4";
  }
  return "unknown";
}

std::array<std::size_t, 5> quartile_bounds(std::size_t n, QuartileRule rule) {
  std::array<std::size_t, 5> b{};
  for (std::size_t k = 0; k <= 4; ++k) {
    b[k] = rule == QuartileRule::Ceiling ? (k * n + 3) / 4 : (k * n) / 4;
  }
  return b;
}

std::size_t Ranking::rank_of(const RiderId& rider) const { return entry(rider).rank; }

const RankEntry& Ranking::entry(const RiderId& rider) const {
  auto it = position.find(rider);
  if (it == position.end()) throw std::out_of_range("rider not ranked: " + rider.str());
  return entries[it->second];
}

Ranking rank(const Allocation& allocation, QuartileRule rule) {
  if (allocation.values.empty()) throw EmptyAllocation("cannot rank an empty allocation");
  Ranking out;
  out.config = allocation.config;
  out.rule = rule;
  out.entries.reserve(allocation.values.size());
  for (const auto& [rider, value] : allocation.values) {
    auto team = allocation.team_of.find(rider);
    out.entries.push_back(
        {0, rider, team == allocation.team_of.end() ? TeamId{} : team->second, value});
  }
  // values is keyed by rider id, so a stable sort on value keeps id order
  // within ties.
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const RankEntry& a, const RankEntry& b) { return a.value > b.value; });

  const auto bounds = quartile_bounds(out.entries.size(), rule);
  int q = 1;
  for (std::size_t i = 0; i < out.entries.size(); ++i) {
    auto& e = out.entries[i];
    e.rank = i + 1;
    while (e.rank > bounds[static_cast<std::size_t>(q)]) ++q;
    out.quartile[e.rider] = q;
    out.position[e.rider] = i;
  }
  return out;
}

namespace {

void check_pair(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("series lengths differ");
  if (xs.size() < 2) throw std::invalid_argument("series need at least two values");
}

struct KendallCounts {
  std::int64_t pairs = 0;        // n0
  std::int64_t x_ties = 0;       // n1
  std::int64_t y_ties = 0;       // n2
  std::int64_t joint_ties = 0;   // n3
  std::int64_t discordant = 0;
  // sums over tie groups used by the variance of C - D
  double x_t2 = 0, x_t3 = 0, x_t5 = 0;
  double y_t2 = 0, y_t3 = 0, y_t5 = 0;

  std::int64_t score() const { return pairs - x_ties - y_ties + joint_ties - 2 * discordant; }
};

template <typename Key>
void tally_groups(const std::vector<std::size_t>& order, Key key, std::int64_t& ties,
                  double& t2, double& t3, double& t5) {
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && key(order[j]) == key(order[i])) ++j;
    const double t = static_cast<double>(j - i);
    const auto ti = static_cast<std::int64_t>(j - i);
    ties += ti * (ti - 1) / 2;
    t2 += t * (t - 1) / 2;
    t3 += t * (t - 1) * (t - 2);
    t5 += t * (t - 1) * (2 * t + 5);
    i = j;
  }
}

// Knight's algorithm: sort by (x, y), then count the inversions in y with
// a merge sort.
KendallCounts kendall_counts(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  KendallCounts c;
  c.pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
  });

  tally_groups(order, [&](std::size_t i) { return xs[i]; }, c.x_ties, c.x_t2, c.x_t3, c.x_t5);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && xs[order[j]] == xs[order[i]] && ys[order[j]] == ys[order[i]]) ++j;
    const auto t = static_cast<std::int64_t>(j - i);
    c.joint_ties += t * (t - 1) / 2;
    i = j;
  }

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = ys[order[i]];
  std::vector<double> buffer(n);
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (y[i] <= y[j]) {
          buffer[k++] = y[i++];
        } else {
          c.discordant += static_cast<std::int64_t>(mid - i);
          buffer[k++] = y[j++];
        }
      }
      while (i < mid) buffer[k++] = y[i++];
      while (j < hi) buffer[k++] = y[j++];
    }
    y.swap(buffer);
  }

  std::vector<std::size_t> sorted(n);
  std::iota(sorted.begin(), sorted.end(), 0);
  tally_groups(sorted, [&](std::size_t i) { return y[i]; }, c.y_ties, c.y_t2, c.y_t3, c.y_t5);
  return c;
}

}  // namespace

double pearson(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateSeries("pearson: constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double kendall_tau_b(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys);
  const auto c = kendall_counts(xs, ys);
  const std::int64_t left = c.pairs - c.x_ties;
  const std::int64_t right = c.pairs - c.y_ties;
  if (left == 0 || right == 0) throw DegenerateSeries("kendall: a series is entirely tied");
  const double tau = static_cast<double>(c.score()) /
                     std::sqrt(static_cast<double>(left) * static_cast<double>(right));
  return std::clamp(tau, -1.0, 1.0);
}

CorrelationTest pearson_test(std::span<const double> xs, std::span<const double> ys,
                             double level) {
  CorrelationTest out;
  out.coefficient = pearson(xs, ys);
  const double n = static_cast<double>(xs.size());
  if (n < 3) return out;
  const double r = out.coefficient;
  if (std::abs(r) >= 1.0) {
    out.p_value = 0.0;
  } else {
    const double t = r * std::sqrt((n - 2) / (1 - r * r));
    boost::math::students_t dist(n - 2);
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  }
  out.significant = out.p_value < level;
  return out;
}

CorrelationTest kendall_test(std::span<const double> xs, std::span<const double> ys,
                             double level) {
  CorrelationTest out;
  out.coefficient = kendall_tau_b(xs, ys);
  const double n = static_cast<double>(xs.size());
  if (n < 3) return out;
  const auto c = kendall_counts(xs, ys);
  const double m = n * (n - 1);
  const double var = (m * (2 * n + 5) - c.x_t5 - c.y_t5) / 18.0 + 2.0 * c.x_t2 * c.y_t2 / m +
                     c.x_t3 * c.y_t3 / (9.0 * m * (n - 2));
  if (!(var > 0.0)) return out;
  const double z = static_cast<double>(c.score()) / std::sqrt(var);
  out.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
  out.significant = out.p_value < level;
  return out;
}

TransitionMatrix transition_matrix(const Ranking& baseline, const Ranking& other) {
  if (baseline.quartile.size() != other.quartile.size()) {
    throw RiderSetMismatch("rankings cover different numbers of riders");
  }
  TransitionMatrix m;
  for (const auto& [rider, qa] : baseline.quartile) {
    auto it = other.quartile.find(rider);
    if (it == other.quartile.end()) {
      throw RiderSetMismatch("rider " + rider.str() + " missing from the other ranking");
    }
    ++m.counts[static_cast<std::size_t>(qa - 1)][static_cast<std::size_t>(it->second - 1)];
    ++m.row_counts[static_cast<std::size_t>(qa - 1)];
  }
  for (std::size_t a = 0; a < 4; ++a) {
    if (m.row_counts[a] == 0) continue;
    for (std::size_t b = 0; b < 4; ++b) {
      m.percent[a][b] = 100.0 * static_cast<double>(m.counts[a][b]) /
                        static_cast<double>(m.row_counts[a]);
    }
  }
  return m;
}

ComparisonReport compare(const Allocation& baseline, const Allocation& other,
                         QuartileRule rule) {
  const Ranking base = rank(baseline, rule);
  const Ranking alt = rank(other, rule);

  ComparisonReport report;
  report.baseline = baseline.config;
  report.against = other.config;
  report.rule = rule;
  report.transitions = transition_matrix(base, alt);

  const std::size_t n = base.entries.size();
  const auto q = quartile_bounds(n, rule);
  auto range_of = [&](Segment s) -> std::pair<std::size_t, std::size_t> {
    switch (s) {
      case Segment::Full: return {0, n};
      case Segment::FirstHalf: return {0, q[2]};
      case Segment::SecondHalf: return {q[2], n};
      case Segment::Q1: return {q[0], q[1]};
      case Segment::Q2: return {q[1], q[2]};
      case Segment::Q3: return {q[2], q[3]};
      case Segment::Q4: return {q[3], q[4]};
    }
    return {0, 0};
  };

  for (Segment s : kSegments) {
    auto [lo, hi] = range_of(s);
    std::vector<double> xs, ys, xr, yr;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& o = alt.entry(base.entries[i].rider);
      xs.push_back(base.entries[i].value);
      ys.push_back(o.value);
      xr.push_back(static_cast<double>(base.entries[i].rank));
      yr.push_back(static_cast<double>(o.rank));
    }
    SegmentStats stats;
    stats.segment = s;
    stats.size = xs.size();
    if (xs.size() >= 2) {
      try {
        stats.pearson = pearson_test(xs, ys);
      } catch (const DegenerateSeries&) {
      }
      try {
        stats.kendall = kendall_test(xs, ys);
      } catch (const DegenerateSeries&) {
      }
      try {
        stats.rank_pearson = pearson_test(xr, yr);
        stats.rank_kendall = kendall_test(xr, yr);
      } catch (const DegenerateSeries&) {
      }
    }
    report.segments.push_back(stats);
  }

  report.differences.reserve(n);
  for (const auto& e : base.entries) {
    const auto& o = alt.entry(e.rider);
    report.differences.push_back({e.rider, e.team, e.rank, o.rank, e.value, o.value,
                                  o.value - e.value,
                                  static_cast<long>(o.rank) - static_cast<long>(e.rank)});
  }
  return report;
}

}  // namespace peloton
