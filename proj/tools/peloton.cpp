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

// peloton: allocate team points among riders, sweep configurations and
// compare rankings from the command line.
//
// Exit codes: 0 success, 1 data or validation failure, 2 usage or config
// error, 3 non-convergence.

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "peloton/analysis.hpp"
#include "peloton/csv.hpp"
#include "peloton/ingest.hpp"
#include "peloton/report.hpp"
#include "peloton/solver.hpp"
#include "peloton/sweep.hpp"
#include "peloton/synth.hpp"

#ifndef PELOTON_VERSION
#define PELOTON_VERSION "dev"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kDataError = 1, kUsageError = 2, kNonConvergence = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts a decimal ("0.25") or a fraction ("1/3").
double parse_real(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    auto num = peloton::csv::parse_number(text.substr(0, slash));
    auto den = peloton::csv::parse_number(text.substr(slash + 1));
    if (!num || !den || *den == 0.0) throw UsageError("not a number: '" + text + "'");
    return *num / *den;
  }
  auto v = peloton::csv::parse_number(text);
  if (!v) throw UsageError("not a number: '" + text + "'");
  return *v;
}

// "0.1,0.5,1", "1/3,1" or an inclusive range "start:stop:step".
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    const double start = parse_real(text.substr(0, a));
    const double stop = parse_real(text.substr(a + 1, b - a - 1));
    const double step = parse_real(text.substr(b + 1));
    if (!(step > 0.0) || stop < start) throw UsageError("bad grid range '" + text + "'");
    const auto steps = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= steps; ++k) {
      out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_real(item));
  }
  if (out.empty()) throw UsageError("empty grid '" + text + "'");
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Records what produced an output file: the command line, input hashes,
// the configuration and a timestamp.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void input(const fs::path& path) {
    if (fs::is_regular_file(path)) {
      inputs_.push_back({{"path", path.string()}, {"sha256", sha256_hex(read_file(path))}});
    }
  }
  void season_inputs(const fs::path& dir, const std::optional<fs::path>& directives) {
    for (const char* name : {"teams.csv", "riders.csv", "results.csv"}) input(dir / name);
    if (directives) input(*directives);
  }
  void output(const fs::path& path, const std::string& bytes) {
    outputs_.push_back({{"path", path.string()}, {"sha256", sha256_hex(bytes)}});
  }
  json& config() { return config_; }

  void write(const fs::path& path) const {
    json m = {{"tool", "peloton"},
              {"version", PELOTON_VERSION},
              {"command", command_},
              {"timestamp", utc_timestamp()},
              {"inputs", inputs_},
              {"outputs", outputs_},
              {"config", config_}};
    std::ofstream(path, std::ios::binary) << m.dump(2) << '\n';
  }

 private:
  std::string command_;
  json inputs_ = json::array();
  json outputs_ = json::array();
  json config_ = json::object();
};

// Writes bytes to `out` (or stdout when empty) plus a sibling manifest.
void emit(const std::string& out, const std::string& bytes, Manifest& manifest) {
  if (out.empty() || out == "-") {
    std::cout << bytes;
    return;
  }
  const fs::path path(out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << bytes;
  }
  manifest.output(path, bytes);
  manifest.write(path.string() + ".manifest.json");
}

// key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path.string() + ":" + std::to_string(n) + ": expected key=value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

// Flags given on the command line win over the file.
void apply_config_file(CLI::App& sub, const std::string& file) {
  if (file.empty()) return;
  for (const auto& [key, value] : read_config_file(file)) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw UsageError("unknown key '" + key + "' in config file for '" + sub.get_name() + "'");
    }
    if (opt->count() > 0) continue;
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1") opt->add_result("true");
    } else {
      opt->add_result(value);
    }
    opt->run_callback();
  }
}

struct SolverFlags {
  std::string alpha;
  std::string beta;
  std::string preset;
  double tolerance = 1e-10;
  long max_iterations = 100000;
  unsigned jobs = 1;

  void add_tolerances(CLI::App* sub) {
    sub->add_option("--tolerance", tolerance, "Convergence tolerance (sup-norm, relative)");
    sub->add_option("--max-iterations", max_iterations, "Iteration limit per team");
    sub->add_option("--jobs", jobs, "Worker threads; output does not depend on it");
  }

  peloton::Config config() const {
    peloton::Config c;
    if (!preset.empty()) {
      if (!alpha.empty() || !beta.empty()) {
        throw UsageError("--preset cannot be combined with --alpha/--beta");
      }
      auto p = peloton::preset(preset);
      if (!p) throw UsageError("unknown preset '" + preset + "' (uci, part, cosc, ref)");
      c = *p;
    } else {
      if (alpha.empty() || beta.empty()) {
        throw UsageError("give --preset or both --alpha and --beta");
      }
      c.alpha = parse_real(alpha);
      c.beta = parse_real(beta);
      c.name = "custom";
    }
    c.tolerance = tolerance;
    c.max_iterations = max_iterations;
    peloton::check_config(c);
    return c;
  }
};

std::optional<fs::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return fs::path(s);
}

void print_warnings(const peloton::IngestReport& report) {
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
}

std::string joined_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) out += (i ? " " : "") + std::string(argv[i]);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Allocate team points among riders and compare the resulting rankings."};
  app.require_subcommand(1);
  app.set_version_flag("--version", PELOTON_VERSION);

  std::string data_dir;
  std::string directives;
  std::string output;
  std::string config_file;

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Check season files and print a summary");
  validate_cmd->add_option("data_dir", data_dir, "Directory with teams.csv, riders.csv, results.csv")
      ->required();
  validate_cmd->add_option("--directives", directives, "Transfer directives CSV");

  // solve
  SolverFlags solve_flags;
  bool unweighted = false;
  bool cross_check = false;
  auto* solve_cmd = app.add_subcommand("solve", "Compute one allocation");
  solve_cmd->add_option("data_dir", data_dir)->required();
  solve_cmd->add_option("--alpha", solve_flags.alpha, "Weight of the non-CoScore part, (0,1]");
  solve_cmd->add_option("--beta", solve_flags.beta, "Weight of raw points vs participation, [0,1]");
  solve_cmd->add_option("--preset", solve_flags.preset, "uci, part, cosc or ref");
  solve_cmd->add_option("-o,--output", output, "Allocation CSV (stdout if omitted)");
  solve_cmd->add_option("--directives", directives);
  solve_cmd->add_option("--config", config_file, "key=value defaults for these flags");
  solve_cmd->add_flag("--unweighted", unweighted, "Drop the points weights from the CoScore term");
  solve_cmd->add_flag("--cross-check", cross_check, "Compare against the reference solver");
  solve_flags.add_tolerances(solve_cmd);

  // sweep
  SolverFlags sweep_flags;
  std::string alpha_grid;
  std::string beta_grid;
  bool with_presets = false;
  bool warm_start = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve over a grid of (alpha, beta)");
  sweep_cmd->add_option("data_dir", data_dir)->required();
  sweep_cmd->add_option("--alpha-grid", alpha_grid, "List a,b,c or range start:stop:step");
  sweep_cmd->add_option("--beta-grid", beta_grid, "List a,b,c or range start:stop:step");
  sweep_cmd->add_flag("--with-presets", with_presets, "Add the UCI, PART, CoSc and REF cells");
  sweep_cmd->add_flag("--warm-start", warm_start, "Start each cell from the previous one");
  sweep_cmd->add_option("-o,--output", output, "Sweep CSV (stdout if omitted)");
  sweep_cmd->add_option("--directives", directives);
  sweep_cmd->add_option("--config", config_file);
  sweep_flags.add_tolerances(sweep_cmd);

  // analyze
  SolverFlags analyze_flags;
  std::string baseline = "uci";
  std::vector<std::string> against;
  std::string quartile_rule = "ceiling";
  auto* analyze_cmd = app.add_subcommand("analyze", "Compare allocations against a baseline");
  analyze_cmd->add_option("data_dir", data_dir)->required();
  analyze_cmd->add_option("--baseline", baseline, "Baseline preset");
  analyze_cmd->add_option("--against", against, "Presets to compare (default part,cosc,ref)")
      ->delimiter(',');
  analyze_cmd->add_option("--quartile-rule", quartile_rule, "ceiling or floor");
  analyze_cmd->add_option("-o,--output", output, "Report JSON (stdout if omitted)");
  analyze_cmd->add_option("--directives", directives);
  analyze_cmd->add_option("--config", config_file);
  analyze_flags.add_tolerances(analyze_cmd);

  // synth
  peloton::SynthSpec spec;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic season in the ingest format");
  synth_cmd->add_option("--teams", spec.teams);
  synth_cmd->add_option("--riders-per-team", spec.riders_per_team);
  synth_cmd->add_option("--races", spec.races);
  synth_cmd->add_option("--leader-fraction", spec.leader_fraction);
  synth_cmd->add_option("--points-scale", spec.points_scale);
  synth_cmd->add_option("--seed", spec.seed);
  synth_cmd->add_option("-o,--output", output, "Output directory")->required();
  synth_cmd->add_option("--config", config_file);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsageError;
  }

  Manifest manifest(joined_args(argc, argv));
  try {
    for (auto* sub : app.get_subcommands()) apply_config_file(*sub, config_file);

    if (*validate_cmd) {
      try {
        auto loaded = peloton::load_season(data_dir, optional_path(directives));
        print_warnings(loaded.report);
        std::cout << peloton::season_summary(loaded.season);
        std::cout << "results loaded " << loaded.report.results_loaded << ", kept "
                  << loaded.report.results_kept << ", dropped " << loaded.report.dropped_results
                  << ", directives applied " << loaded.report.directives_applied << '\n';
        std::cout << "valid\n";
        return kOk;
      } catch (const peloton::IngestError& e) {
        std::cout << "invalid: " << e.what() << '\n';
        return kDataError;
      }
    }

    if (*synth_cmd) {
      try {
        peloton::check_spec(spec);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const auto season = peloton::generate(spec);
      peloton::write_season(season, output);
      for (const char* name : {"teams.csv", "riders.csv", "results.csv"}) {
        manifest.output(fs::path(output) / name, read_file(fs::path(output) / name));
      }
      manifest.config() = {{"teams", spec.teams},
                           {"riders_per_team", spec.riders_per_team},
                           {"races", spec.races},
                           {"leader_fraction", spec.leader_fraction},
                           {"points_scale", spec.points_scale},
                           {"seed", spec.seed}};
      manifest.write(fs::path(output) / "manifest.json");
      return kOk;
    }

    const auto dirs = optional_path(directives);
    auto loaded = peloton::load_season(data_dir, dirs);
    print_warnings(loaded.report);
    manifest.season_inputs(data_dir, dirs);
    const auto& season = loaded.season;

    if (*solve_cmd) {
      const auto config = solve_flags.config();
      peloton::SolveOptions options;
      options.jobs = solve_flags.jobs;
      auto alloc = unweighted ? peloton::solve_unweighted(season, config, options)
                              : peloton::solve(season, config, options);
      if (cross_check && !unweighted) {
        const auto oracle = peloton::oracle_solve(season, config);
        for (const auto& [rider, v] : alloc.values) {
          const double o = oracle.value(rider);
          if (std::abs(v - o) > 1e-6 * std::max(1.0, std::abs(o))) {
            std::cerr << "warning: rider " << rider.str() << ": solver " << v
                      << " vs reference " << o << " (fixed point may not be unique)\n";
          }
        }
      }
      manifest.config() = peloton::to_json(config);
      manifest.config()["unweighted"] = unweighted;
      emit(output, peloton::allocation_csv(alloc), manifest);
      return kOk;
    }

    if (*sweep_cmd) {
      peloton::SweepGrid grid;
      if (alpha_grid.empty() && beta_grid.empty()) {
        grid = peloton::SweepGrid::standard();
      } else {
        grid.alphas = parse_grid(alpha_grid.empty() ? "0.1:1:0.1" : alpha_grid);
        grid.betas = parse_grid(beta_grid.empty() ? "0:1:0.1" : beta_grid);
        if (with_presets) grid.with_presets();
      }
      try {
        (void)grid.cells();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      peloton::SweepOptions options;
      options.base.tolerance = sweep_flags.tolerance;
      options.base.max_iterations = sweep_flags.max_iterations;
      peloton::check_config(options.base);
      options.jobs = sweep_flags.jobs;
      options.warm_start = warm_start;
      auto result = peloton::run_sweep(season, grid, options);
      json cells = json::array();
      for (const auto& [a, b] : grid.cells()) cells.push_back({a, b});
      manifest.config() = {{"cells", cells},
                           {"tolerance", options.base.tolerance},
                           {"max_iterations", options.base.max_iterations},
                           {"warm_start", warm_start}};
      emit(output, peloton::sweep_csv(result), manifest);
      return kOk;
    }

    if (*analyze_cmd) {
      auto config_for = [&](const std::string& name) {
        auto c = peloton::preset(name);
        if (!c) throw UsageError("unknown preset '" + name + "' (uci, part, cosc, ref)");
        c->tolerance = analyze_flags.tolerance;
        c->max_iterations = analyze_flags.max_iterations;
        peloton::check_config(*c);
        return *c;
      };
      peloton::QuartileRule rule;
      if (quartile_rule == "ceiling") {
        rule = peloton::QuartileRule::Ceiling;
      } else if (quartile_rule == "floor") {
        rule = peloton::QuartileRule::Floor;
      } else {
        throw UsageError("--quartile-rule must be ceiling or floor");
      }
      if (against.empty()) against = {"part", "cosc", "ref"};

      peloton::SolveOptions options;
      options.jobs = analyze_flags.jobs;
      const auto base_config = config_for(baseline);
      const auto base = peloton::solve(season, base_config, options);
      json comparisons = json::array();
      json configs = json::array();
      for (const auto& name : against) {
        const auto other_config = config_for(name);
        const auto other = peloton::solve(season, other_config, options);
        comparisons.push_back(peloton::to_json(peloton::compare(base, other, rule)));
        configs.push_back(peloton::to_json(other_config));
      }
      json report = {{"season", peloton::to_json(loaded.report.totals)},
                     {"quartile_rule", peloton::to_string(rule)},
                     {"comparisons", comparisons}};
      manifest.config() = {{"baseline", peloton::to_json(base_config)},
                           {"against", configs},
                           {"quartile_rule", peloton::to_string(rule)}};
      emit(output, report.dump(2) + "\n", manifest);
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const peloton::InvalidConfig& e) {
    std::cerr << "error: invalid config: " << e.what() << '\n';
    return kUsageError;
  } catch (const peloton::NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const peloton::SweepError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.non_convergence ? kNonConvergence : kDataError;
  } catch (const peloton::IngestError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
