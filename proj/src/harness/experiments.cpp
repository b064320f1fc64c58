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

#include "lorentz_bg/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "lorentz_bg/billiard.hpp"
#include "lorentz_bg/errors.hpp"
#include "lorentz_bg/greenfn.hpp"
#include "lorentz_bg/observables.hpp"
#include "lorentz_bg/parallel.hpp"
#include "lorentz_bg/poisson.hpp"

namespace lorentz_bg::harness {
namespace {

Stream converge_stream(const ExperimentConfig& c, std::size_t e) { return Stream(c.seed).split("converge").split(e); }

double intensity(const ExperimentConfig& c, double eps) {
  return c.zero_intensity ? 0.0 : boltzmann_grad_intensity(c.dim, eps);
}

PointConfiguration draw_configuration(const ExperimentConfig& c, double eps, Rng& rng) {
  const double lambda = intensity(c, eps);
  const double radius = c.R + c.T + 2.0 * eps;
  if (lambda == 0.0) return {c.dim, {}, radius, 0.0};
  return sample_configuration(c.dim, lambda, radius, rng);
}

struct CellSample {
  PhasePoint endpoint;
  double w_unfiltered = 0.0;
  double w_filtered = 0.0;
};

ParticleEnsemble initial_ensemble(const ExperimentConfig& c) {
  const Stream s = Stream(c.seed).split("limit").split("init");
  ParticleEnsemble ens{c.dim, 0.0, std::vector<PhasePoint>(c.n_particles)};
  parallel_for(c.n_particles, [&](std::size_t i) {
    Rng rng(s.split(i));
    ens.particles[i] = sample_initial(c.initial_datum, c.dim, rng);
  });
  return ens;
}

/// Evolves the f_in ensemble through the sorted t_eval, calling visit(t, ensemble) at each.
template <class Visit>
void walk_limit(const ExperimentConfig& c, bool include_zero, Visit&& visit) {
  std::vector<double> times = c.t_eval;
  std::sort(times.begin(), times.end());
  const Stream jump = Stream(c.seed).split("limit").split("jump");
  const ScatterParams params = ScatterParams::for_dim(c.dim);
  ParticleEnsemble ens = initial_ensemble(c);
  if (include_zero) visit(0.0, ens);
  for (std::size_t k = 0; k < times.size(); ++k) {
    ens = evolve_jump(std::move(ens), times[k] - ens.time, params, jump.split(k));
    visit(times[k], ens);
  }
}

ResultRow row(double eps, double t, std::string name, const Estimate& e, std::uint64_t seed) {
  return {eps, t, std::move(name), e.value, e.std_error, e.n, seed};
}

}  // namespace

std::vector<PhasePoint> initial_samples(const ExperimentConfig& config, std::size_t eps_index) {
  config.validate();
  if (eps_index >= config.eps_list.size()) throw InvalidParameter("eps index out of range");
  const Stream base = converge_stream(config, eps_index);
  std::vector<PhasePoint> out(config.n_configs);
  parallel_for(config.n_configs, [&](std::size_t i) {
    Rng rng(base.split(i));
    out[i] = sample_initial(config.initial_datum, config.dim, rng);
  });
  return out;
}

ResultTable limit_pairings(const ExperimentConfig& config) {
  config.validate();
  const auto phis = select_observables(config.dim, config.observables);
  ResultTable rows;
  walk_limit(config, false, [&](double t, const ParticleEnsemble& ens) {
    for (const Observable& phi : phis) rows.push_back(row(0.0, t, phi.name, pair(ens, phi), config.seed));
  });
  return rows;
}

ConvergenceResult run_convergence(const ExperimentConfig& config, const ConvergenceOptions& options) {
  config.validate();
  const auto phis = select_observables(config.dim, config.observables);
  const std::size_t n = config.n_configs;
  const std::size_t n_t = config.t_eval.size();
  ConvergenceResult result;

  for (std::size_t e = 0; e < config.eps_list.size(); ++e) {
    const double eps = config.eps_list[e];
    const Stream base = converge_stream(config, e);
    std::vector<CellSample> cells(n * n_t);
    parallel_for(n, [&](std::size_t i) {
      Rng rng(base.split(i));
      const PhasePoint z = sample_initial(config.initial_datum, config.dim, rng);
      const PointConfiguration obstacles = draw_configuration(config, eps, rng);
      const SpatialGrid grid = build_grid(obstacles, eps);
      const bool occ = occupancy_indicator(z.x, obstacles, grid, eps) == 1;
      const bool sep = min_separation_ok(obstacles, eps, config.R + config.T);
      for (std::size_t k = 0; k < n_t; ++k) {
        CellSample& cell = cells[i * n_t + k];
        cell.endpoint = z;
        if (!occ) continue;
        const TrajectoryResult traj = flow(z, config.t_eval[k], obstacles, grid, eps);
        cell.endpoint = traj.endpoint;
        cell.w_unfiltered = 1.0;
        cell.w_filtered = sep && traj.recollision_free == 1 ? 1.0 : 0.0;
      }
    });

    std::vector<double> unf(n), fil(n), gap(n);
    for (std::size_t k = 0; k < n_t; ++k) {
      const double t = config.t_eval[k];
      for (std::size_t i = 0; i < n; ++i) gap[i] = cells[i * n_t + k].w_unfiltered - cells[i * n_t + k].w_filtered;
      const Estimate mass_gap = mean_estimate(gap);
      result.mass_gap.push_back(row(eps, t, "mass_gap", mass_gap, config.seed));
      for (const Observable& phi : phis) {
        for (std::size_t i = 0; i < n; ++i) {
          const CellSample& cell = cells[i * n_t + k];
          const double value = phi(cell.endpoint);
          unf[i] = cell.w_unfiltered * value;
          fil[i] = cell.w_filtered * value;
        }
        const Estimate u = mean_estimate(unf);
        const Estimate f = mean_estimate(fil);
        result.unfiltered.push_back(row(eps, t, phi.name, u, config.seed));
        result.filtered.push_back(row(eps, t, phi.name, f, config.seed));
        result.bound_violation =
            std::max(result.bound_violation, std::fabs(u.value - f.value) - mass_gap.value * phi.bound);
        if (phi.name == options.dump_observable) result.raw.push_back({eps, t, phi.name, unf});
      }
    }
  }

  const ResultTable limit = limit_pairings(config);
  for (const ResultRow& r : result.unfiltered) {
    for (const ResultRow& l : limit) {
      if (l.t != r.t || l.observable != r.observable) continue;
      result.gap.push_back({r.eps, r.t, r.observable, std::fabs(r.estimate - l.estimate),
                            combined_error(r.std_error, l.std_error), r.n, r.seed});
    }
  }
  result.unfiltered.insert(result.unfiltered.end(), limit.begin(), limit.end());
  return result;
}

ResultTable run_mass_check(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n = config.n_configs;
  const std::size_t n_t = config.t_eval.size();
  static const char* const kNames[] = {"mass_unfiltered",      "mass_separated", "mass_filtered",
                                       "p_start_inside",       "p_separation_failure", "deficiency",
                                       "decomposition_residual"};
  constexpr std::size_t kQ = std::size(kNames);
  ResultTable rows;

  for (std::size_t e = 0; e < config.eps_list.size(); ++e) {
    const double eps = config.eps_list[e];
    const Stream base = Stream(config.seed).split("mass").split(e);
    // values[(i * n_t + k) * kQ + q]
    std::vector<double> values(n * n_t * kQ);
    parallel_for(n, [&](std::size_t i) {
      Rng rng(base.split(i));
      const PhasePoint z = sample_initial(config.initial_datum, config.dim, rng);
      const PointConfiguration obstacles = draw_configuration(config, eps, rng);
      const SpatialGrid grid = build_grid(obstacles, eps);
      const double occ = occupancy_indicator(z.x, obstacles, grid, eps);
      const double sep = min_separation_ok(obstacles, eps, config.R + config.T) ? 1.0 : 0.0;
      for (std::size_t k = 0; k < n_t; ++k) {
        double filtered = 0.0;
        if (occ * sep == 1.0) filtered = flow(z, config.t_eval[k], obstacles, grid, eps).recollision_free;
        double* v = &values[(i * n_t + k) * kQ];
        v[0] = occ;
        v[1] = occ * sep;
        v[2] = filtered;
        v[3] = 1.0 - occ;
        v[4] = 1.0 - sep;
        v[5] = 1.0 - occ * sep;
        v[6] = v[5] - v[3] - v[4];
      }
    });
    std::vector<double> column(n);
    for (std::size_t k = 0; k < n_t; ++k) {
      for (std::size_t q = 0; q < kQ; ++q) {
        for (std::size_t i = 0; i < n; ++i) column[i] = values[(i * n_t + k) * kQ + q];
        rows.push_back(row(eps, config.t_eval[k], kNames[q], mean_estimate(column), config.seed));
      }
    }
  }

  const std::size_t n0 = config.n_particles;
  walk_limit(config, false, [&](double t, const ParticleEnsemble& ens) {
    rows.push_back({0.0, t, "mass", static_cast<double>(ens.size()) / static_cast<double>(n0), 0.0, n0,
                    config.seed});
  });
  return rows;
}

ResultTable run_green(const ExperimentConfig& config) {
  config.validate();
  const auto phis = select_observables(config.dim, config.observables);
  const GreenSettings& g = config.green;
  ResultTable rows;
  for (std::size_t e = 0; e < config.eps_list.size(); ++e) {
    GreenParams params;
    params.dim = config.dim;
    params.eps = config.eps_list[e];
    params.R = g.R;
    params.T = g.T;
    if (config.zero_intensity) params.intensity = 0.0;
    const Stream base = Stream(config.seed).split("green").split(e);
    const auto samples = sample_green(g.t, g.z, params, g.n_samples, base.split("samples"));

    const std::size_t n = samples.size();
    std::vector<double> mass(n), unf(n), j1(n), j2(n), gap(n), inside(n), sep_fail(n);
    for (std::size_t i = 0; i < n; ++i) {
      const GreenSample& s = samples[i];
      mass[i] = s.weight();
      unf[i] = s.weight_unfiltered();
      j1[i] = s.n_collisions == 0 ? s.weight() : 0.0;
      j2[i] = s.n_collisions == 0 ? 0.0 : s.weight();
      gap[i] = unf[i] - mass[i];
      inside[i] = s.free_start ? 0.0 : 1.0;
      sep_fail[i] = s.separated ? 0.0 : 1.0;
    }
    auto add = [&](const std::string& name, const Estimate& est) {
      rows.push_back(row(params.eps, g.t, name, est, config.seed));
    };
    add("mass", mean_estimate(mass));
    add("mass_unfiltered", mean_estimate(unf));
    add("J1", mean_estimate(j1));
    add("J2", mean_estimate(j2));
    add("recollision_gap", mean_estimate(gap));
    add("p_start_inside", mean_estimate(inside));
    add("p_separation_failure", mean_estimate(sep_fail));
    std::vector<double> values(n);
    for (const Observable& phi : phis) {
      for (std::size_t i = 0; i < n; ++i) values[i] = mass[i] == 0.0 ? 0.0 : phi(samples[i].endpoint);
      add(phi.name, mean_estimate(values));
    }
    const auto ie = verify_integral_equation(g.t, g.z, params, phis, g.n_outer, g.n_inner, base.split("ie"));
    for (std::size_t j = 0; j < phis.size(); ++j) {
      add("ie_lhs:" + phis[j].name, {ie[j].lhs, ie[j].lhs_std_error, g.n_outer * g.n_inner});
      add("ie_rhs:" + phis[j].name, {ie[j].rhs, ie[j].rhs_std_error, g.n_outer});
      add("ie_residual:" + phis[j].name, {ie[j].residual, ie[j].std_error, g.n_outer});
    }
  }
  return rows;
}

BoltzmannRun run_boltzmann(const ExperimentConfig& config) {
  config.validate();
  const auto phis = select_observables(config.dim, config.observables);
  const BoltzmannSettings& b = config.boltzmann;
  const ScatterParams params = ScatterParams::for_dim(config.dim);
  const Stream base = Stream(config.seed).split("boltzmann");
  BoltzmannRun run;

  walk_limit(config, true, [&](double t, const ParticleEnsemble& ens) {
    const std::size_t keep = std::min(b.snapshot_particles, ens.size());
    run.snapshots.push_back({t, {ens.particles.begin(), ens.particles.begin() + static_cast<std::ptrdiff_t>(keep)}});
    for (const Observable& phi : phis) run.series.push_back(row(0.0, t, phi.name, pair(ens, phi), config.seed));
  });

  ParticleEnsemble fixed{config.dim, 0.0, std::vector<PhasePoint>(b.n_mc, b.z)};
  fixed = evolve_jump(std::move(fixed), b.t, params, base.split("fixed_jump"));
  for (std::size_t j = 0; j < phis.size(); ++j) {
    const DuhamelResult d = duhamel_eval(phis[j], b.t, b.z, params, b.n_max, b.n_mc, base.split("duhamel").split(j));
    run.duhamel.push_back(row(0.0, b.t, "duhamel:" + phis[j].name, {d.value, d.std_error, d.n}, config.seed));
    run.duhamel.push_back(row(0.0, b.t, "jump:" + phis[j].name, pair(fixed, phis[j]), config.seed));
    run.duhamel.push_back(row(0.0, b.t, "truncation:" + phis[j].name, {d.truncation_bound, 0.0, d.n}, config.seed));
  }

  const double rate = params.sigma * (1.0 - mean_deflection_cosine(config.dim));
  const auto vacf = velocity_autocorrelation(config.dim, config.n_particles, b.autocorrelation_times, base.split("vacf"));
  for (std::size_t k = 0; k < vacf.size(); ++k) {
    const double t = b.autocorrelation_times[k];
    run.autocorrelation.push_back(row(0.0, t, "vacf", vacf[k], config.seed));
    run.autocorrelation.push_back(row(0.0, t, "vacf_exact", {std::exp(-rate * t), 0.0, 0}, config.seed));
  }

  run.deflection = deflection_density_check(config.dim, b.n_scatters, base.split("deflection"));
  return run;
}

void write_series_csv(const std::filesystem::path& path, const ResultTable& rows) {
  std::string text = "t,observable,estimate,stderr\n";
  char buf[128];
  for (const ResultRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,", r.t);
    text += buf;
    text += r.observable;
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", r.estimate, r.std_error);
    text += buf;
  }
  write_text(path, text);
}

void write_snapshots_csv(const std::filesystem::path& path, int dim, const std::vector<Snapshot>& snapshots) {
  std::string text = "t";
  for (int k = 1; k <= dim; ++k) text += ",x" + std::to_string(k);
  for (int k = 1; k <= dim; ++k) text += ",v" + std::to_string(k);
  text += '\n';
  char buf[40];
  for (const Snapshot& s : snapshots) {
    for (const PhasePoint& p : s.particles) {
      std::snprintf(buf, sizeof buf, "%.17g", s.t);
      text += buf;
      for (int k = 0; k < dim; ++k) {
        std::snprintf(buf, sizeof buf, ",%.17g", p.x[k]);
        text += buf;
      }
      for (int k = 0; k < dim; ++k) {
        std::snprintf(buf, sizeof buf, ",%.17g", p.v[k]);
        text += buf;
      }
      text += '\n';
    }
  }
  write_text(path, text);
}

}  // namespace lorentz_bg::harness
