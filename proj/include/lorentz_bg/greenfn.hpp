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
#include <optional>
#include <vector>

#include "lorentz_bg/billiard.hpp"
#include "lorentz_bg/observables.hpp"
#include "lorentz_bg/random.hpp"

namespace lorentz_bg {

/// Obstacle radius, support parameters and intensity of one Green-function study.
struct GreenParams {
  int dim = 2;
  double eps = 0.02;
  /// Initial positions lie in B(0, R); trajectories run for at most T.
  double R = 2.0;
  double T = 2.0;
  /// Overrides the Boltzmann-Grad intensity eps^{1-d} (0 gives the empty-configuration stream).
  std::optional<double> intensity;

  double lambda() const;
  /// Ball B(0, R + T + 2 eps) in which obstacles are drawn.
  double sample_radius() const { return R + T + 2.0 * eps; }
  double separation_radius() const { return R + T; }
  void validate() const;
};

/// Outcome of one configuration draw for a fixed (t, z).
struct GreenSample {
  PhasePoint endpoint;
  bool free_start = false;      // z in the closed table
  bool separated = false;       // C in the 3 eps-separated class on B(0, R + T)
  bool recollision_free = true; // Lambda_eps(1, N; z; C)
  std::size_t n_collisions = 0;

  /// occupancy * separation * recollision filter.
  double weight() const { return free_start && separated && recollision_free ? 1.0 : 0.0; }
  /// Weight without the recollision factor.
  double weight_unfiltered() const { return free_start && separated ? 1.0 : 0.0; }
};

/// Draws n_samples configurations (sample i from stream.split(i)) and flows z for
/// time t in each. Flows are skipped when the weight is already zero; those
/// samples keep endpoint = z.
std::vector<GreenSample> sample_green(double t, const PhasePoint& z, const GreenParams& params,
                                      std::size_t n_samples, const Stream& stream);

struct Atom {
  PhasePoint endpoint;
  int weight = 0;
};

struct GreenMetadata {
  double t = 0.0;
  PhasePoint z;
  double eps = 0.0;
  double R = 0.0;
  double T = 0.0;
  std::uint64_t seed = 0;
};

/// Weighted endpoint atoms representing G_eps^{R,T}(t, z, .).
struct EmpiricalMeasure {
  std::vector<Atom> atoms;
  std::size_t n_samples = 0;
  GreenMetadata meta;

  double mass() const;
};

/// <measure, phi> with its standard error over all n_samples (zero-weight samples count as 0).
Estimate pair(const EmpiricalMeasure& measure, const Observable& phi);

/// Monte Carlo G_eps^{R,T}(t, z, .). Requires t in [0, T] and |z.x| <= R + T - t.
EmpiricalMeasure estimate_green(double t, const PhasePoint& z, const GreenParams& params, std::size_t n_samples,
                                const Stream& stream);

struct J1J2 {
  Estimate j1;
  Estimate j2;
  /// Mass of estimate_green on the same stream; equals j1 + j2 exactly.
  double total = 0.0;
};

/// Splits the filtered mass into samples with no collision before t (J1) and the rest (J2).
J1J2 decompose_J1_J2(double t, const PhasePoint& z, const GreenParams& params, std::size_t n_samples,
                     const Stream& stream);

/// (mass without the recollision factor) - (filtered mass), on shared samples. Always >= 0.
Estimate recollision_mass_gap(double t, const PhasePoint& z, const GreenParams& params, std::size_t n_samples,
                              const Stream& stream);

struct IntegralEquationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double std_error = 0.0;
  double lhs_std_error = 0.0;
  double rhs_std_error = 0.0;
};

/// Residual of G = e^{-sigma t} delta_{z + t T z} + \int_0^t \int sigma e^{-sigma tau}
/// G(t - tau, S[tau, h] z, .) u(dh) d tau paired with phi.
///
/// lhs uses n_outer * n_inner direct samples. The rhs draws n_outer pairs
/// (tau ~ Exp(sigma) conditioned on [0, t], h uniform) and pairs an inner
/// estimate_green of n_inner samples at each.
IntegralEquationCheck verify_integral_equation(double t, const PhasePoint& z, const GreenParams& params,
                                               const Observable& phi, std::size_t n_outer, std::size_t n_inner,
                                               const Stream& stream);

/// Same as verify_integral_equation for several observables on shared samples.
std::vector<IntegralEquationCheck> verify_integral_equation(double t, const PhasePoint& z, const GreenParams& params,
                                                            const std::vector<Observable>& phis, std::size_t n_outer,
                                                            std::size_t n_inner, const Stream& stream);

/// Scattering map S[tau, h](x, v) = (x + tau v, scatter(v, h)).
PhasePoint scattering_map(const PhasePoint& z, double tau, const Vec& h);

}  // namespace lorentz_bg
