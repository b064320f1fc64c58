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
#include <vector>

#include "lorentz_bg/random.hpp"
#include "lorentz_bg/vec.hpp"

namespace lorentz_bg {

/// Obstacle centers of one Poisson sample restricted to B(0, sample_radius).
///
/// Obstacle id is the index into `centers`, which is the sampling order.
struct PointConfiguration {
  int dim = 2;
  std::vector<Vec> centers;
  double sample_radius = 0.0;
  double intensity = 0.0;

  std::size_t size() const { return centers.size(); }
  bool empty() const { return centers.empty(); }
};

struct SamplerLimits {
  /// Largest admissible expected count intensity * |B(0, radius)|.
  double max_expected_count = 5.0e7;
};

/// Homogeneous Poisson process of the given intensity in B(0, radius):
/// N ~ Poisson(intensity |B|), then N independent uniform points.
///
/// Throws InvalidParameter for dim outside {2, 3}, non-finite or negative
/// intensity, or non-positive radius; ResourceLimit when the expected count
/// exceeds `limits.max_expected_count`.
PointConfiguration sample_configuration(int dim, double intensity, double radius, Rng& rng,
                                        const SamplerLimits& limits = {});

/// True iff every pair of distinct centers lying in the closed ball B(0, region_radius)
/// is at distance strictly greater than 3 eps.
bool min_separation_ok(const PointConfiguration& config, double eps, double region_radius);

/// Number of pairs inside B(0, region_radius) at distance <= 3 eps.
std::size_t close_pair_count(const PointConfiguration& config, double eps, double region_radius);

struct ProbabilityEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Monte Carlo frequency of min_separation_ok failures for configurations
/// sampled in B(0, region_radius), with the binomial standard error.
/// Requires n_samples >= 100.
ProbabilityEstimate estimate_exclusion_probability(int dim, double eps, double intensity,
                                                   double region_radius, std::size_t n_samples,
                                                   const Stream& stream);

/// 1 iff x is at distance >= eps from every center (brute-force scan).
int occupancy_indicator(const Vec& x, const PointConfiguration& config, double eps);

/// Boltzmann-Grad intensity: lambda eps^{d-1} = 1.
inline double boltzmann_grad_intensity(int dim, double eps) { return std::pow(eps, 1 - dim); }

}  // namespace lorentz_bg
