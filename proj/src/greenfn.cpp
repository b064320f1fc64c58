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

#include "lorentz_bg/greenfn.hpp"

#include <cmath>

#include "lorentz_bg/boltzmann.hpp"
#include "lorentz_bg/errors.hpp"
#include "lorentz_bg/parallel.hpp"

namespace lorentz_bg {
namespace {

void check_request(double t, const PhasePoint& z, const GreenParams& params) {
  params.validate();
  if (!(t >= 0.0) || t > params.T) throw InvalidParameter("t must lie in [0, T]");
  if (norm(z.x) > params.R + params.T - t + 1e-9) {
    throw InvalidParameter("start point must satisfy |x| <= R + T - t");
  }
  if (std::fabs(norm(z.v) - 1.0) > 1e-9) throw InvalidParameter("start velocity must be a unit vector");
}

GreenSample draw_sample(double t, const PhasePoint& z, const GreenParams& params, const Stream& stream) {
  Rng rng(stream);
  const double lambda = params.lambda();
  PointConfiguration config;
  config.dim = params.dim;
  config.sample_radius = params.sample_radius();
  config.intensity = lambda;
  if (lambda > 0.0) config = sample_configuration(params.dim, lambda, params.sample_radius(), rng);

  GreenSample s;
  s.endpoint = z;
  s.separated = min_separation_ok(config, params.eps, params.separation_radius());
  s.free_start = occupancy_indicator(z.x, config, params.eps) == 1;
  if (!(s.free_start && s.separated) || t == 0.0) return s;
  const SpatialGrid grid = build_grid(config, params.eps);
  const TrajectoryResult traj = flow(z, t, config, grid, params.eps);
  s.endpoint = traj.endpoint;
  s.recollision_free = traj.recollision_free == 1;
  s.n_collisions = traj.n_collisions;
  return s;
}

std::vector<GreenSample> sample_green_serial(double t, const PhasePoint& z, const GreenParams& params,
                                             std::size_t n_samples, const Stream& stream) {
  std::vector<GreenSample> out(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) out[i] = draw_sample(t, z, params, stream.split(i));
  return out;
}

EmpiricalMeasure to_measure(double t, const PhasePoint& z, const GreenParams& params,
                            const std::vector<GreenSample>& samples, const Stream& stream) {
  EmpiricalMeasure m;
  m.n_samples = samples.size();
  m.meta = {t, z, params.eps, params.R, params.T, stream.key()};
  m.atoms.reserve(samples.size());
  for (const GreenSample& s : samples) m.atoms.push_back({s.endpoint, static_cast<int>(s.weight())});
  return m;
}

}  // namespace

double GreenParams::lambda() const { return intensity.value_or(boltzmann_grad_intensity(dim, eps)); }

void GreenParams::validate() const {
  if (dim != 2 && dim != 3) throw InvalidParameter("dimension must be 2 or 3");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidParameter("eps must be finite and positive");
  if (!(R >= 0.0) || !(T > 0.0) || !std::isfinite(R) || !std::isfinite(T)) {
    throw InvalidParameter("R must be >= 0 and T > 0");
  }
  if (intensity && (!(*intensity >= 0.0) || !std::isfinite(*intensity))) {
    throw InvalidParameter("intensity must be finite and non-negative");
  }
}

std::vector<GreenSample> sample_green(double t, const PhasePoint& z, const GreenParams& params,
                                      std::size_t n_samples, const Stream& stream) {
  check_request(t, z, params);
  std::vector<GreenSample> out(n_samples);
  parallel_for(n_samples, [&](std::size_t i) { out[i] = draw_sample(t, z, params, stream.split(i)); });
  return out;
}

double EmpiricalMeasure::mass() const {
  if (n_samples == 0) return 0.0;
  double w = 0.0;
  for (const Atom& a : atoms) w += a.weight;
  return w / static_cast<double>(n_samples);
}

Estimate pair(const EmpiricalMeasure& measure, const Observable& phi) {
  std::vector<double> values(measure.n_samples, 0.0);
  for (std::size_t i = 0; i < measure.atoms.size(); ++i) {
    if (measure.atoms[i].weight != 0) values[i] = measure.atoms[i].weight * phi(measure.atoms[i].endpoint);
  }
  return mean_estimate(values);
}

EmpiricalMeasure estimate_green(double t, const PhasePoint& z, const GreenParams& params, std::size_t n_samples,
                                const Stream& stream) {
  return to_measure(t, z, params, sample_green(t, z, params, n_samples, stream), stream);
}

J1J2 decompose_J1_J2(double t, const PhasePoint& z, const GreenParams& params, std::size_t n_samples,
                     const Stream& stream) {
  const auto samples = sample_green(t, z, params, n_samples, stream);
  std::vector<double> j1(n_samples), j2(n_samples);
  double total = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double w = samples[i].weight();
    j1[i] = samples[i].n_collisions == 0 ? w : 0.0;
    j2[i] = samples[i].n_collisions == 0 ? 0.0 : w;
    total += w;
  }
  return {mean_estimate(j1), mean_estimate(j2), total / static_cast<double>(n_samples)};
}

Estimate recollision_mass_gap(double t, const PhasePoint& z, const GreenParams& params, std::size_t n_samples,
                              const Stream& stream) {
  const auto samples = sample_green(t, z, params, n_samples, stream);
  std::vector<double> gap(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) gap[i] = samples[i].weight_unfiltered() - samples[i].weight();
  return mean_estimate(gap);
}

PhasePoint scattering_map(const PhasePoint& z, double tau, const Vec& h) { return {z.x + tau * z.v, scatter(z.v, h)}; }

std::vector<IntegralEquationCheck> verify_integral_equation(double t, const PhasePoint& z, const GreenParams& params,
                                                            const std::vector<Observable>& phis, std::size_t n_outer,
                                                            std::size_t n_inner, const Stream& stream) {
  check_request(t, z, params);
  if (n_outer < 2 || n_inner == 0) throw InvalidParameter("need n_outer >= 2 and n_inner >= 1");
  const std::size_t k_obs = phis.size();
  const double sigma = ScatterParams::for_dim(params.dim).sigma;
  const double survive = std::exp(-sigma * t);
  const double hit = 1.0 - survive;

  const EmpiricalMeasure lhs_measure = estimate_green(t, z, params, n_outer * n_inner, stream.split("lhs"));

  // rhs_samples[k * k_obs + j]: outer draw k, observable j.
  std::vector<double> rhs_samples(n_outer * k_obs);
  const Stream outer = stream.split("outer");
  const Stream inner = stream.split("inner");
  parallel_for(n_outer, [&](std::size_t k) {
    std::vector<double> inner_mean(k_obs, 0.0);
    if (t > 0.0) {
      Rng rng(outer.split(k));
      const double tau = std::min(t, -std::log1p(-rng.uniform() * hit) / sigma);
      const Vec h = impact_vector(z.v, sample_impact(params.dim, rng), params.dim);
      const PhasePoint start = scattering_map(z, tau, h);
      const auto samples = sample_green_serial(t - tau, start, params, n_inner, inner.split(k));
      for (const GreenSample& s : samples) {
        if (s.weight() == 0.0) continue;
        for (std::size_t j = 0; j < k_obs; ++j) inner_mean[j] += phis[j](s.endpoint);
      }
      for (double& m : inner_mean) m /= static_cast<double>(n_inner);
    }
    for (std::size_t j = 0; j < k_obs; ++j) {
      rhs_samples[k * k_obs + j] = survive * phis[j](free_flight(z, t)) + hit * inner_mean[j];
    }
  });

  std::vector<IntegralEquationCheck> out(k_obs);
  std::vector<double> column(n_outer);
  for (std::size_t j = 0; j < k_obs; ++j) {
    const Estimate l = pair(lhs_measure, phis[j]);
    for (std::size_t k = 0; k < n_outer; ++k) column[k] = rhs_samples[k * k_obs + j];
    const Estimate r = mean_estimate(column);
    out[j] = {l.value, r.value, l.value - r.value, combined_error(l.std_error, r.std_error), l.std_error,
              r.std_error};
  }
  return out;
}

IntegralEquationCheck verify_integral_equation(double t, const PhasePoint& z, const GreenParams& params,
                                               const Observable& phi, std::size_t n_outer, std::size_t n_inner,
                                               const Stream& stream) {
  return verify_integral_equation(t, z, params, std::vector<Observable>{phi}, n_outer, n_inner, stream).front();
}

}  // namespace lorentz_bg
