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

#include "lorentz_bg/boltzmann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lorentz_bg/errors.hpp"
#include "lorentz_bg/parallel.hpp"
#include "lorentz_bg/quadrature.hpp"

namespace lorentz_bg {
namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int dim) {
  if (dim != 2 && dim != 3) throw InvalidParameter("dimension must be 2 or 3, got " + std::to_string(dim));
}

Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// CDF of the d = 2 deflection angle, density (1/4)|sin(theta/2)| on (-pi, pi].
double deflection_cdf_2d(double theta) {
  const double half = 0.5 * (1.0 - std::cos(0.5 * theta));
  return theta >= 0.0 ? 0.5 + half : 0.5 - half;
}

// Pairs bin k with its mirror n-1-k; under symmetry each pair splits
// binomially with p = 1/2, so sum (a - b)^2 / (a + b) is chi-square.
Chi2Result mirror_symmetry(const std::vector<std::size_t>& counts) {
  Chi2Result r;
  const std::size_t n = counts.size();
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double a = static_cast<double>(counts[k]);
    const double b = static_cast<double>(counts[n - 1 - k]);
    if (a + b > 0.0) {
      r.statistic += (a - b) * (a - b) / (a + b);
      ++r.dof;
    }
  }
  r.p_value = chi2_upper_tail(r.statistic, r.dof);
  return r;
}

}  // namespace

ScatterParams ScatterParams::for_dim(int dim) {
  check_dim(dim);
  return {dim, unit_ball_volume(dim - 1)};
}

Vec sample_impact(int dim, Rng& rng) {
  check_dim(dim);
  if (dim == 2) return {2.0 * rng.uniform() - 1.0, 0.0, 0.0};
  const double r = std::sqrt(rng.uniform());
  const double phi = 2.0 * kPi * rng.uniform();
  return {r * std::cos(phi), r * std::sin(phi), 0.0};
}

ImpactFrame impact_frame(const Vec& v, int dim) {
  check_dim(dim);
  if (dim == 2) return {Vec{-v[1], v[0], 0.0}, Vec{}};
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (std::fabs(v[a]) < std::fabs(v[axis])) axis = a;
  }
  Vec e;
  e[axis] = 1.0;
  const Vec e1 = normalized(e - dot(e, v) * v);
  return {e1, cross(v, e1)};
}

Vec impact_vector(const Vec& v, const Vec& frame_coords, int dim) {
  const ImpactFrame f = impact_frame(v, dim);
  if (dim == 2) return frame_coords[0] * f.e1;
  return frame_coords[0] * f.e1 + frame_coords[1] * f.e2;
}

Vec scatter(const Vec& v, const Vec& h) {
  const double h2 = std::min(norm2(h), 1.0);
  const double s = std::sqrt(1.0 - h2);
  return normalized((2.0 * h2 - 1.0) * v + 2.0 * s * h);
}

Vec scatter_normal(const Vec& v, const Vec& h) {
  const double s = std::sqrt(std::max(0.0, 1.0 - norm2(h)));
  return h - s * v;
}

Vec random_scatter(const Vec& v, int dim, Rng& rng) {
  return scatter(v, impact_vector(v, sample_impact(dim, rng), dim));
}

ParticleEnsemble evolve_jump(ParticleEnsemble ensemble, double dt, const ScatterParams& params,
                             const Stream& stream) {
  if (!(dt >= 0.0)) throw InvalidParameter("dt must be >= 0");
  const int dim = ensemble.dim;
  parallel_for(ensemble.size(), [&](std::size_t i) {
    PhasePoint& p = ensemble.particles[i];
    Rng rng(stream.split(i));
    double left = dt;
    for (;;) {
      const double hold = rng.exponential(params.sigma);
      if (hold >= left) {
        p.x += left * p.v;
        break;
      }
      p.x += hold * p.v;
      p.v = random_scatter(p.v, dim, rng);
      left -= hold;
    }
  });
  ensemble.time += dt;
  return ensemble;
}

Estimate pair(const ParticleEnsemble& ensemble, const Observable& phi) {
  std::vector<double> values(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) values[i] = phi(ensemble.particles[i]);
  return mean_estimate(values);
}

std::vector<Estimate> velocity_autocorrelation(int dim, std::size_t n_particles, const std::vector<double>& times,
                                               const Stream& stream) {
  check_dim(dim);
  ParticleEnsemble ens;
  ens.dim = dim;
  ens.particles.resize(n_particles);
  const Stream init = stream.split("init");
  for (std::size_t i = 0; i < n_particles; ++i) {
    Rng rng(init.split(i));
    ens.particles[i] = {Vec{}, uniform_direction(rng, dim)};
  }
  std::vector<Vec> v0(n_particles);
  for (std::size_t i = 0; i < n_particles; ++i) v0[i] = ens.particles[i].v;
  const ScatterParams params = ScatterParams::for_dim(dim);
  std::vector<Estimate> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double dt = times[k] - ens.time;
    if (dt < 0.0) throw InvalidParameter("velocity_autocorrelation times must be ascending");
    ens = evolve_jump(std::move(ens), dt, params, stream.split(k));
    std::vector<double> c(n_particles);
    for (std::size_t i = 0; i < n_particles; ++i) c[i] = dot(ens.particles[i].v, v0[i]);
    out.push_back(mean_estimate(c));
  }
  return out;
}

DeflectionCheck deflection_density_check(int dim, std::size_t n_samples, const Stream& stream, std::size_t n_bins) {
  check_dim(dim);
  if (n_bins < 2 || n_bins % 2 != 0) throw InvalidParameter("n_bins must be even and >= 2");
  DeflectionCheck out;
  out.dim = dim;
  out.n_samples = n_samples;
  const double lo = dim == 2 ? -kPi : -1.0;
  const double hi = dim == 2 ? kPi : 1.0;
  out.bin_edges.resize(n_bins + 1);
  for (std::size_t k = 0; k <= n_bins; ++k) out.bin_edges[k] = lo + (hi - lo) * static_cast<double>(k) / n_bins;

  // Per-sample (binned value, mirror-test value).
  std::vector<double> value(n_samples), mirror(n_samples);
  parallel_for(n_samples, [&](std::size_t i) {
    Rng rng(stream.split(i));
    const Vec v = uniform_direction(rng, dim);
    const Vec h = impact_vector(v, sample_impact(dim, rng), dim);
    const Vec w = scatter(v, h);
    if (dim == 2) {
      const double theta = std::atan2(v[0] * w[1] - v[1] * w[0], dot(v, w));
      value[i] = theta;
      mirror[i] = theta;
    } else {
      const ImpactFrame f = impact_frame(v, 3);
      value[i] = std::clamp(dot(v, w), -1.0, 1.0);
      mirror[i] = std::atan2(dot(w, f.e2), dot(w, f.e1));
    }
  });

  auto bin_of = [&](double x, double a, double b) {
    const auto k = static_cast<std::ptrdiff_t>(std::floor((x - a) / (b - a) * static_cast<double>(n_bins)));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(n_bins) - 1));
  };
  out.counts.assign(n_bins, 0);
  std::vector<std::size_t> mirror_counts(n_bins, 0);
  std::size_t within = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    ++out.counts[bin_of(value[i], lo, hi)];
    ++mirror_counts[bin_of(mirror[i], -kPi, kPi)];
    within += dim == 2 ? (std::fabs(value[i]) <= 0.5 * kPi) : (value[i] >= 0.0);
  }

  out.expected.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    const double p = dim == 2 ? deflection_cdf_2d(out.bin_edges[k + 1]) - deflection_cdf_2d(out.bin_edges[k])
                              : 1.0 / static_cast<double>(n_bins);
    out.expected[k] = p * static_cast<double>(n_samples);
  }
  std::vector<double> observed(out.counts.begin(), out.counts.end());
  const Chi2Result gof = chi2_goodness_of_fit(observed, out.expected);
  out.chi2 = gof.statistic;
  out.dof = gof.dof;
  out.p_value = gof.p_value;

  const double n = static_cast<double>(n_samples);
  out.frac_half_pi = static_cast<double>(within) / n;
  out.frac_half_pi_se = std::sqrt(out.frac_half_pi * (1.0 - out.frac_half_pi) / n);

  const Chi2Result sym = mirror_symmetry(dim == 2 ? out.counts : mirror_counts);
  out.symmetry_chi2 = sym.statistic;
  out.symmetry_dof = sym.dof;
  out.symmetry_p_value = sym.p_value;
  return out;
}

double kernel_total_mass(int dim) {
  check_dim(dim);
  if (dim == 2) {
    // (1/4) \int |cos a| da over one period, split at the kinks of |cos|.
    auto f = [](double t) { return std::fabs(std::cos(t)); };
    const double s = gauss_legendre(-0.5 * kPi, 0.5 * kPi, f) + gauss_legendre(0.5 * kPi, 1.5 * kPi, f);
    return s / (2.0 * unit_ball_volume(1));
  }
  // Azimuth integrates to 2 pi; polar part split at pi/2.
  auto f = [](double t) { return std::fabs(std::cos(t)) * std::sin(t); };
  const double polar = gauss_legendre(0.0, 0.5 * kPi, f) + gauss_legendre(0.5 * kPi, kPi, f);
  return 2.0 * kPi * polar / (2.0 * unit_ball_volume(2));
}

double mean_deflection_cosine(int dim) {
  check_dim(dim);
  if (dim == 2) {
    auto f = [](double t) { return std::cos(t) * 0.25 * std::fabs(std::sin(0.5 * t)); };
    return gauss_legendre(-kPi, 0.0, f) + gauss_legendre(0.0, kPi, f);
  }
  // cos(theta) = 2|h|^2 - 1 with |h|^2 uniform: theta has density sin(theta)/2.
  return gauss_legendre(0.0, kPi, [](double t) { return std::cos(t) * 0.5 * std::sin(t); });
}

double poisson_tail(double mean, std::size_t n) {
  if (!(mean > 0.0)) return 0.0;
  // Terms k > n, starting from the log pmf to avoid cancellation.
  double log_term = -mean + static_cast<double>(n + 1) * std::log(mean) - std::lgamma(static_cast<double>(n) + 2.0);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (std::size_t k = n + 1; k < n + 2000; ++k) {
    sum += term;
    term *= mean / static_cast<double>(k + 1);
    if (term < sum * 1e-17) break;
  }
  return std::min(sum, 1.0);
}

DuhamelResult duhamel_eval(const Observable& phi, double t, const PhasePoint& z, const ScatterParams& params,
                           std::size_t n_max, std::size_t n_mc, const Stream& stream) {
  if (!(t >= 0.0)) throw InvalidParameter("t must be >= 0");
  if (n_mc == 0) throw InvalidParameter("n_mc must be positive");
  const double sigma = params.sigma;
  std::vector<double> samples(n_mc);
  parallel_for(n_mc, [&](std::size_t i) {
    Rng rng(stream.split(i));
    PhasePoint cur = z;
    double left = t;
    double weight = 1.0;
    double value = 0.0;
    for (std::size_t level = 0;; ++level) {
      const double survive = std::exp(-sigma * left);
      value += weight * survive * phi(free_flight(cur, left));
      if (level == n_max || left == 0.0 || sigma == 0.0) break;
      const double hit = 1.0 - survive;
      const double tau = -std::log1p(-rng.uniform() * hit) / sigma;  // Exp(sigma) conditioned on [0, left]
      cur.x += std::min(tau, left) * cur.v;
      cur.v = random_scatter(cur.v, params.dim, rng);
      left = std::max(0.0, left - tau);
      weight *= hit;
    }
    samples[i] = value;
  });
  const Estimate e = mean_estimate(samples);
  return {e.value, e.std_error, phi.bound * poisson_tail(sigma * t, n_max), n_mc};
}

}  // namespace lorentz_bg
