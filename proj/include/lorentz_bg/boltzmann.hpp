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
#include <vector>

#include "lorentz_bg/observables.hpp"
#include "lorentz_bg/random.hpp"
#include "lorentz_bg/vec.hpp"

namespace lorentz_bg {

/// Collision rate of the limit process, sigma = |B^{d-1}| (2 in d = 2, pi in d = 3).
struct ScatterParams {
  int dim = 2;
  double sigma = 2.0;

  static ScatterParams for_dim(int dim);
};

/// Impact parameter uniform on the unit (d-1)-ball, in frame coordinates:
/// component 0 (d = 2) or components 0, 1 (d = 3); the rest are zero.
Vec sample_impact(int dim, Rng& rng);

/// Orthonormal frame of the hyperplane orthogonal to v.
///
/// d = 2: e1 = v rotated by +pi/2. d = 3: Gram-Schmidt starting from the
/// coordinate axis least aligned with v (lowest index on ties), e2 = v x e1.
struct ImpactFrame {
  Vec e1;
  Vec e2;
};
ImpactFrame impact_frame(const Vec& v, int dim);

/// Impact parameter as a vector of R^d orthogonal to v.
Vec impact_vector(const Vec& v, const Vec& frame_coords, int dim);

/// Post-collision velocity (2|h|^2 - 1) v + 2 sqrt(1 - |h|^2) h for h orthogonal to v, |h| <= 1.
Vec scatter(const Vec& v, const Vec& h);

/// Normal nu = h - sqrt(1 - |h|^2) v at the collision point; scatter(v, h) == reflect(v, nu).
Vec scatter_normal(const Vec& v, const Vec& h);

/// One scatter with a fresh uniform impact parameter.
Vec random_scatter(const Vec& v, int dim, Rng& rng);

/// Population of independent limit-process particles, each of weight 1/N.
struct ParticleEnsemble {
  int dim = 2;
  double time = 0.0;
  std::vector<PhasePoint> particles;

  std::size_t size() const { return particles.size(); }
};

/// Velocity jump process: free flight at unit speed, Exp(sigma) clocks, and
/// v <- scatter(v, h) with h uniform. Particle i draws from stream.split(i);
/// the particle count never changes.
ParticleEnsemble evolve_jump(ParticleEnsemble ensemble, double dt, const ScatterParams& params,
                             const Stream& stream);

Estimate pair(const ParticleEnsemble& ensemble, const Observable& phi);

/// E[v(t) . v(0)] for a spatially homogeneous ensemble with uniform initial
/// velocities, at each requested time (ascending).
std::vector<Estimate> velocity_autocorrelation(int dim, std::size_t n_particles,
                                               const std::vector<double>& times, const Stream& stream);

struct DeflectionCheck {
  int dim = 2;
  std::size_t n_samples = 0;
  /// d = 2: signed deflection angle on (-pi, pi]. d = 3: cos(theta) on [-1, 1].
  std::vector<double> bin_edges;
  std::vector<std::size_t> counts;
  std::vector<double> expected;
  double chi2 = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
  /// Frequency of |theta| <= pi/2 with its binomial standard error.
  double frac_half_pi = 0.0;
  double frac_half_pi_se = 0.0;
  /// Reflection symmetry theta -> -theta (d = 2) or azimuth -> -azimuth (d = 3).
  double symmetry_chi2 = 0.0;
  std::size_t symmetry_dof = 0;
  double symmetry_p_value = 0.0;
};

/// Empirical post-collision law of scatter(v, sample_impact()) against the
/// density |v . nu| / (2 |B^{d-1}|); d = 2 bins the angle, density (1/4)|sin(theta/2)|.
DeflectionCheck deflection_density_check(int dim, std::size_t n_samples, const Stream& stream,
                                         std::size_t n_bins = 40);

/// (1 / (2 |B^{d-1}|)) \int_{S^{d-1}} |v . nu| d nu by Gauss-Legendre quadrature.
double kernel_total_mass(int dim);

/// E[cos theta] of the deflection law by quadrature over the impact parameter.
double mean_deflection_cosine(int dim);

struct DuhamelResult {
  double value = 0.0;
  double std_error = 0.0;
  double truncation_bound = 0.0;
  std::size_t n = 0;
};

/// <Gamma(t, z, .), phi> from the Duhamel series truncated after n_max scatterings.
///
/// Each sample follows one branch of the series: the no-collision term
/// e^{-sigma s} phi(free flight) is added analytically at every level, the next
/// collision time is drawn from Exp(sigma) conditioned on [0, s] and weighted by
/// 1 - e^{-sigma s}. truncation_bound = sup|phi| P(Poisson(sigma t) > n_max).
DuhamelResult duhamel_eval(const Observable& phi, double t, const PhasePoint& z, const ScatterParams& params,
                           std::size_t n_max, std::size_t n_mc, const Stream& stream);

/// P(Poisson(mean) > n), summed from the tail.
double poisson_tail(double mean, std::size_t n);

}  // namespace lorentz_bg
