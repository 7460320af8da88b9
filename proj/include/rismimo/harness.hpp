// Copyright 2026 The rismimo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISMIMO_HARNESS_HPP
#define RISMIMO_HARNESS_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rismimo/beamforming.hpp"
#include "rismimo/stochastic_selection.hpp"

namespace rismimo {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AltOptOptions {
  std::string selection_method = "greedy";  // perfect: greedy|exhaustive|random
                                            // stochastic: spgm|cg|simple-greedy|random
  double tol = 1e-4;       // bits; stop when a round gains less
  int max_rounds = 10;
  std::uint64_t seed = 1;
  // Stochastic-regime knobs.
  int spgm_iterations = 100;
  int batch = 32;
  std::uint64_t exhaustive_budget = 1000000;
};

struct AltOptRound {
  int round = 0;
  AntennaSet set;
  ReflectionState reflection;
  double capacity_bits = 0.0;  // instantaneous or ensemble mean, per regime
  double select_seconds = 0.0;
  double beamform_seconds = 0.0;
};

struct AltOptReport {
  std::vector<AltOptRound> rounds;
  bool converged = false;
  std::uint64_t seed = 0;

  double final_capacity() const { return rounds.back().capacity_bits; }
  const AntennaSet& final_set() const { return rounds.back().set; }
  const ReflectionState& final_reflection() const {
    return rounds.back().reflection;
  }
};

AltOptReport alternating_optimize_perfect(const ChannelTriple& t,
                                          const SystemConfig& cfg,
                                          const AltOptOptions& opt);

AltOptReport alternating_optimize_stochastic(const ChannelEnsemble& e,
                                             const SystemConfig& cfg,
                                             const AltOptOptions& opt);

// Flat dotted-key spec document: "key = value" lines, '#' comments.
// Unknown keys are errors.
struct ExperimentSpec {
  SystemConfig base;
  std::string regime = "perfect";  // perfect | stochastic
  std::vector<std::string> methods;  // "<selection>+<phase>"
  // Sweep axes, applied as a Cartesian product over config overrides.
  std::vector<std::pair<std::string, std::vector<double>>> sweeps;
  int realizations = 100;
  int ensemble_samples = 20;  // stochastic regime
  AltOptOptions altopt;
};

struct BenchSpec {
  int repetitions = 3;
  int exhaustive_antennas = 16;
  int exhaustive_active = 4;
  int guard_antennas = 20;  // deliberately over the guard budget
  int guard_active = 10;
  std::uint64_t guard_budget = 100000;
  std::uint64_t exhaustive_budget = 1000000;
  int gradient_antennas = 128;
  int gradient_users = 8;
  int gradient_set_size = 16;
  SystemConfig stochastic_cfg;
  int stochastic_samples = 20;
  std::uint64_t seed = 1;
};

ExperimentSpec parse_experiment_spec(const std::filesystem::path& path);
BenchSpec parse_bench_spec(const std::filesystem::path& path);

// Writes results.tsv, aggregate.tsv and manifest.txt under out_dir.
void run_experiment(const ExperimentSpec& spec,
                    const std::filesystem::path& out_dir);

// Writes bench.tsv under out_dir.
void run_bench(const BenchSpec& spec, const std::filesystem::path& out_dir);

// Shared key-value document reader (also used for bench specs and tests).
std::map<std::string, std::string> read_kv_document(
    const std::filesystem::path& path);

inline constexpr const char* kToolVersion = "rismimo 0.1.0";

}  // namespace rismimo

#endif  // RISMIMO_HARNESS_HPP
