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
#include <string>
#include <vector>

#include "lorentz_bg/boltzmann.hpp"
#include "lorentz_bg/harness/config.hpp"
#include "lorentz_bg/harness/output.hpp"

namespace lorentz_bg::harness {

/// Per-sample values of one observable for one (eps, t) cell.
struct RawColumn {
  double eps = 0.0;
  double t = 0.0;
  std::string observable;
  std::vector<double> values;
};

struct ConvergenceOptions {
  /// When non-empty, keep the per-sample unfiltered values of this observable.
  std::string dump_observable;
};

struct ConvergenceResult {
  /// <f_in, F_eps(t) phi> with occupancy weight only, followed by the eps = 0 rows
  /// from the velocity jump process.
  ResultTable unfiltered;
  /// Same samples weighted by occupancy * separation * recollision filter.
  ResultTable filtered;
  /// |unfiltered - limit| with the combined standard error.
  ResultTable gap;
  /// Mean of (unfiltered weight - filtered weight), observable "mass_gap".
  ResultTable mass_gap;
  /// max over cells of |unfiltered - filtered| - mass_gap * sup|phi|; <= 0 up to rounding.
  double bound_violation = 0.0;
  std::vector<RawColumn> raw;
};

/// Initial phase points used for eps_list[eps_index]; identical to those drawn
/// inside run_convergence.
std::vector<PhasePoint> initial_samples(const ExperimentConfig& config, std::size_t eps_index);

ConvergenceResult run_convergence(const ExperimentConfig& config, const ConvergenceOptions& options = {});

/// eps = 0 rows: jump-process pairings at every t_eval for the selected observables.
ResultTable limit_pairings(const ExperimentConfig& config);

/// Rows per (eps, t): mass_unfiltered, mass_separated, mass_filtered,
/// p_start_inside, p_separation_failure, deficiency (1 - mass_separated) and
/// decomposition_residual (deficiency - p_start_inside - p_separation_failure,
/// averaged per sample). eps = 0 rows report the jump-process mass.
ResultTable run_mass_check(const ExperimentConfig& config);

/// Green-function study at config.green for each eps: mass, J1, J2,
/// recollision_gap, pairings of the selected observables, and
/// ie_lhs / ie_rhs / ie_residual rows per observable.
ResultTable run_green(const ExperimentConfig& config);

struct Snapshot {
  double t = 0.0;
  std::vector<PhasePoint> particles;
};

struct BoltzmannRun {
  /// First boltzmann.snapshot_particles particles at t = 0 and every t_eval.
  std::vector<Snapshot> snapshots;
  /// Jump-process pairings over time (eps column = 0).
  ResultTable series;
  /// duhamel:<name> and jump:<name> at the fixed start boltzmann.z; truncation:<name> bounds.
  ResultTable duhamel;
  /// vacf measured and vacf_exact = exp(-sigma (1 - E cos theta) t).
  ResultTable autocorrelation;
  DeflectionCheck deflection;
};

BoltzmannRun run_boltzmann(const ExperimentConfig& config);

/// t,observable,estimate,stderr.
void write_series_csv(const std::filesystem::path& path, const ResultTable& rows);
/// t,x1..xd,v1..vd.
void write_snapshots_csv(const std::filesystem::path& path, int dim, const std::vector<Snapshot>& snapshots);

}  // namespace lorentz_bg::harness
