// Copyright 2026 The lorentz-bg Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lorentz_bg/random.hpp"
#include "lorentz_bg/vec.hpp"

namespace lorentz_bg::harness {

/// Initial datum f_in: a normalized C^2 radial bump (1 - |x|^2/r^2)^3 in x
/// times the uniform law on S^{d-1}. The only kind currently is "bump".
struct InitialDatum {
  std::string kind = "bump";
  double radius = 1.0;
};

/// Draw z ~ f_in / ||f_in||_1.
PhasePoint sample_initial(const InitialDatum& datum, int dim, Rng& rng);

/// Fixed-start settings for the `green` subcommand.
struct GreenSettings {
  PhasePoint z{Vec{0.0, 0.0, 0.0}, Vec{1.0, 0.0, 0.0}};
  double t = 1.0;
  double R = 2.0;
  double T = 2.0;
  std::size_t n_samples = 20000;
  std::size_t n_outer = 400;
  std::size_t n_inner = 25;
};

/// Settings for the `boltzmann` subcommand.
struct BoltzmannSettings {
  PhasePoint z{Vec{0.0, 0.0, 0.0}, Vec{1.0, 0.0, 0.0}};
  double t = 1.0;
  std::vector<double> autocorrelation_times{0.25, 0.5, 1.0};
  std::size_t n_scatters = 1000000;
  std::size_t n_max = 12;
  std::size_t n_mc = 100000;
  std::size_t snapshot_particles = 1000;
};

struct ExperimentConfig {
  int dim = 2;
  std::vector<double> eps_list{0.05, 0.02, 0.01};
  double R = 1.0;
  double T = 2.0;
  std::vector<double> t_eval{1.0};
  std::size_t n_configs = 100000;
  std::size_t n_particles = 100000;
  std::uint64_t seed = 20240527;
  InitialDatum initial_datum;
  /// Dictionary entries to report; empty selects the full default dictionary.
  std::vector<std::string> observables;
  std::string output_dir = "out";
  /// Diagnostic mode: obstacle intensity forced to 0.
  bool zero_intensity = false;
  GreenSettings green;
  BoltzmannSettings boltzmann;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Parses the documented schema. Unknown keys and type mismatches are ConfigErrors.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace lorentz_bg::harness
