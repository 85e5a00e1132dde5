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

// Shared seasons and generators for the test binaries.

#ifndef PELOTON_TESTS_FIXTURES_HPP
#define PELOTON_TESTS_FIXTURES_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "peloton/model.hpp"
#include "peloton/synth.hpp"

namespace peloton::testing {

// One team, three riders, four one-day races: rider 1 helps the two leaders.
//   A: r1 50,  r2 950
//   B: r1 100, r3 900
//   C: r1 200 (alone)
//   D: r1 200, r2 1200, r3 600
inline Season worked_example() {
  std::vector<Team> teams{{TeamId("T1"), "Example", "WT"}};
  std::vector<Rider> riders{{RiderId("r1"), "Rider 1", TeamId("T1")},
                            {RiderId("r2"), "Rider 2", TeamId("T1")},
                            {RiderId("r3"), "Rider 3", TeamId("T1")}};
  std::vector<Race> races{{RaceId("A"), "Race A", "1.UWT"},
                          {RaceId("B"), "Race B", "1.UWT"},
                          {RaceId("C"), "Race C", "1.UWT"},
                          {RaceId("D"), "Race D", "1.UWT"}};
  auto res = [](const char* race, const char* rider, double p) {
    return RaceResult{RaceId(race), TeamId("T1"), RiderId(rider), p, 1.0, std::nullopt};
  };
  std::vector<RaceResult> results{res("A", "r1", 50),   res("A", "r2", 950),
                                  res("B", "r1", 100),  res("B", "r3", 900),
                                  res("C", "r1", 200),  res("D", "r1", 200),
                                  res("D", "r2", 1200), res("D", "r3", 600)};
  return Season(teams, riders, races, results);
}

// Small random season: at most 5 riders and 6 races per team.
inline Season small_random_season(SplitMix64& rng) {
  SynthSpec spec;
  spec.teams = 1 + static_cast<int>(rng.below(3));
  spec.riders_per_team = 1 + static_cast<int>(rng.below(5));
  spec.races = 1 + static_cast<int>(rng.below(6));
  spec.leader_fraction = 0.2 + 0.8 * rng.uniform();
  spec.points_scale = 50.0 + 500.0 * rng.uniform();
  spec.seed = rng.next();
  return generate(spec);
}

// Medium random season for property checks.
inline Season random_season(SplitMix64& rng) {
  SynthSpec spec;
  spec.teams = 1 + static_cast<int>(rng.below(4));
  spec.riders_per_team = 1 + static_cast<int>(rng.below(10));
  spec.races = 1 + static_cast<int>(rng.below(25));
  spec.leader_fraction = 0.05 + 0.95 * rng.uniform();
  spec.points_scale = 10.0 + 1000.0 * rng.uniform();
  spec.seed = rng.next();
  return generate(spec);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Fresh, empty scratch directory under the system temp directory.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("peloton_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_worked_example(const std::filesystem::path& dir) {
  write_text(dir / "teams.csv", "team_id,name,category\nT1,Example Team,WT\n");
  write_text(dir / "riders.csv",
             "rider_id,name,team_id\nr1,Rider One,T1\nr2,Rider Two,T1\nr3,Rider Three,T1\n");
  write_text(dir / "results.csv",
             "race_id,race_name,category,team_id,rider_id,points,days\n"
             "A,Race A,1.UWT,T1,r1,50,1\n"
             "A,Race A,1.UWT,T1,r2,950,1\n"
             "B,Race B,1.UWT,T1,r1,100,1\n"
             "B,Race B,1.UWT,T1,r3,900,1\n"
             "C,Race C,1.UWT,T1,r1,200,1\n"
             "D,Race D,1.UWT,T1,r1,200,1\n"
             "D,Race D,1.UWT,T1,r2,1200,1\n"
             "D,Race D,1.UWT,T1,r3,600,1\n");
}

}  // namespace peloton::testing

#endif  // PELOTON_TESTS_FIXTURES_HPP
