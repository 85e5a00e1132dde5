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

#ifndef PELOTON_SYNTH_HPP
#define PELOTON_SYNTH_HPP

#include <cstdint>

#include "peloton/model.hpp"

namespace peloton {

/// SplitMix64. Fixed arithmetic so a seed yields the same stream on every
/// platform and in any language that ports these few lines.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  bool chance(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

struct SynthSpec {
  int teams = 2;
  int riders_per_team = 8;
  int races = 20;
  double leader_fraction = 0.25;  // in (0, 1]
  double points_scale = 300.0;
  std::uint64_t seed = 1;
};

/// Throws std::invalid_argument for counts < 1 or parameters out of range.
void check_spec(const SynthSpec& spec);

/// Deterministic season with leader/domestique structure. Leaders are the
/// first ceil(leader_fraction * riders_per_team) riders of every team.
Season generate(const SynthSpec& spec);

}  // namespace peloton

#endif  // PELOTON_SYNTH_HPP
