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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lorentz_bg/billiard.hpp"
#include "lorentz_bg/errors.hpp"
#include "lorentz_bg/harness/config.hpp"
#include "lorentz_bg/harness/experiments.hpp"
#include "lorentz_bg/harness/output.hpp"
#include "lorentz_bg/harness/plot.hpp"
#include "lorentz_bg/observables.hpp"
#include "lorentz_bg/parallel.hpp"
#include "lorentz_bg/poisson.hpp"

namespace fs = std::filesystem;
using namespace lorentz_bg;
using namespace lorentz_bg::harness;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;
constexpr int kCheckFailed = 4;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out_dir;
};

ExperimentConfig resolve(const Globals& g) {
  ExperimentConfig c = g.config_path.empty() ? ExperimentConfig{} : load_config(g.config_path);
  if (g.seed) c.seed = *g.seed;
  if (!g.out_dir.empty()) c.output_dir = g.out_dir;
  c.validate();
  if (g.threads > 0) set_thread_count(static_cast<std::size_t>(g.threads));
  return c;
}

Vec parse_vec(const std::string& text, int dim, const std::string& field) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string cell;
  try {
    while (std::getline(ss, cell, ',')) parts.push_back(std::stod(cell));
  } catch (const std::logic_error&) {
    throw ConfigError(field, "expected comma-separated numbers");
  }
  if (parts.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError(field, "expected " + std::to_string(dim) + " components");
  }
  Vec v{0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) v[k] = parts[k];
  return v;
}

void print_line(const char* status, const std::string& text) { std::printf("%-5s %s\n", status, text.c_str()); }

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

int cmd_sample(const Globals& g, double eps_arg, double radius_arg, double intensity_arg) {
  const ExperimentConfig c = resolve(g);
  const double eps = eps_arg > 0.0 ? eps_arg : c.eps_list.front();
  const double radius = radius_arg > 0.0 ? radius_arg : c.R + c.T + 2.0 * eps;
  const double lambda = intensity_arg >= 0.0 ? intensity_arg : boltzmann_grad_intensity(c.dim, eps);
  if (!(eps > 0.0)) throw ConfigError("eps", "must be positive");
  Rng rng(Stream(c.seed).split("sample"));
  const PointConfiguration config = sample_configuration(c.dim, lambda, radius, rng);
  const double region = std::min(radius, c.R + c.T);
  const std::size_t close = close_pair_count(config, eps, region);

  std::string text = "id";
  for (int k = 1; k <= c.dim; ++k) text += ",x" + std::to_string(k);
  text += '\n';
  char buf[64];
  for (std::size_t i = 0; i < config.size(); ++i) {
    text += std::to_string(i);
    for (int k = 0; k < c.dim; ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g", config.centers[i][k]);
      text += buf;
    }
    text += '\n';
  }
  const fs::path out = c.output_dir;
  write_text(out / "configuration.csv", text);
  write_metadata(out / "configuration.json", "sample",
                 {{"dim", c.dim},
                  {"eps", eps},
                  {"radius", radius},
                  {"intensity", lambda},
                  {"seed", c.seed},
                  {"count", config.size()},
                  {"separation_radius", region},
                  {"close_pairs", close},
                  {"separated", close == 0}});
  std::printf("%zu obstacles in B(0, %g); %zu pairs closer than 3 eps in B(0, %g)\n", config.size(), radius, close,
              region);
  return kOk;
}

int cmd_trace(const Globals& g, double eps_arg, double t_arg, const std::string& x_text, const std::string& v_text,
              std::size_t n) {
  const ExperimentConfig c = resolve(g);
  const double eps = eps_arg > 0.0 ? eps_arg : c.eps_list.front();
  const double t = t_arg >= 0.0 ? t_arg : c.T;
  PhasePoint z{parse_vec(x_text, c.dim, "x"), parse_vec(v_text, c.dim, "v")};
  if (std::fabs(norm(z.v) - 1.0) > 1e-9) throw ConfigError("v", "must be a unit vector");
  const double radius = norm(z.x) + t + 2.0 * eps;
  const double lambda = c.zero_intensity ? 0.0 : boltzmann_grad_intensity(c.dim, eps);
  const Stream base = Stream(c.seed).split("trace");

  std::ostringstream csv;
  write_trajectory_csv_header(csv, c.dim);
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(base.split(i));
    PointConfiguration config{c.dim, {}, radius, 0.0};
    if (lambda > 0.0) config = sample_configuration(c.dim, lambda, radius, rng);
    const SpatialGrid grid = build_grid(config, eps);
    FlowOptions options;
    options.record_path = true;
    const TrajectoryResult traj = flow(z, t, config, grid, eps, options);
    write_trajectory_csv(csv, i, traj, c.dim);
    std::vector<double> end_x(c.dim), end_v(c.dim);
    for (int k = 0; k < c.dim; ++k) {
      end_x[k] = traj.endpoint.x[k];
      end_v[k] = traj.endpoint.v[k];
    }
    samples.push_back({{"sample_id", i},
                       {"started_in_table", traj.started_in_table},
                       {"n_collisions", traj.n_collisions},
                       {"recollision_free", traj.recollision_free},
                       {"endpoint", {{"x", end_x}, {"v", end_v}}}});
  }
  const fs::path out = c.output_dir;
  write_text(out / "trace.csv", csv.str());
  write_metadata(out / "trace.json", "trace",
                 {{"dim", c.dim}, {"eps", eps}, {"t", t}, {"seed", c.seed}, {"samples", samples}});
  std::printf("%zu trajectories written to %s\n", n, (out / "trace.csv").string().c_str());
  return kOk;
}

int cmd_green(const Globals& g) {
  const ExperimentConfig c = resolve(g);
  const ResultTable rows = run_green(c);
  const fs::path out = c.output_dir;
  write_csv(out / "green.csv", rows);
  write_metadata(out / "green.json", "green", to_json(c));
  for (const ResultRow& r : rows) {
    if (r.observable.find(':') != std::string::npos && r.observable.rfind("ie_residual:", 0) != 0) continue;
    std::printf("eps=%-6g %-28s %.6g +- %.2g\n", r.eps, r.observable.c_str(), r.estimate, r.std_error);
  }
  return kOk;
}

int cmd_boltzmann(const Globals& g, bool check) {
  const ExperimentConfig c = resolve(g);
  const BoltzmannRun run = run_boltzmann(c);
  const fs::path out = c.output_dir;
  write_series_csv(out / "boltzmann_series.csv", run.series);
  write_snapshots_csv(out / "boltzmann_snapshots.csv", c.dim, run.snapshots);
  write_csv(out / "boltzmann_duhamel.csv", run.duhamel);
  write_csv(out / "boltzmann_vacf.csv", run.autocorrelation);
  const DeflectionCheck& d = run.deflection;
  nlohmann::json params = to_json(c);
  params["deflection"] = {{"n_samples", d.n_samples},        {"chi2", d.chi2},
                          {"dof", d.dof},                    {"p_value", d.p_value},
                          {"frac_half_pi", d.frac_half_pi},  {"frac_half_pi_se", d.frac_half_pi_se},
                          {"symmetry_chi2", d.symmetry_chi2}, {"symmetry_p_value", d.symmetry_p_value}};
  write_metadata(out / "boltzmann.json", "boltzmann", params);

  bool ok = true;
  auto report = [&](bool pass, const std::string& text) {
    ok = ok && pass;
    print_line(pass ? "PASS" : "FAIL", text);
  };
  report(d.p_value > 1e-3, fmt("deflection law chi2=%.1f p=%.3g", d.chi2, d.p_value));
  report(d.symmetry_p_value > 1e-3, fmt("deflection symmetry p=%.3g", d.symmetry_p_value));
  const double half = c.dim == 2 ? 1.0 - 1.0 / std::sqrt(2.0) : 0.5;
  report(std::fabs(d.frac_half_pi - half) <= 3.0 * d.frac_half_pi_se,
         fmt("P(|theta| <= pi/2) = %.5f expected %.5f", d.frac_half_pi, half));
  for (std::size_t k = 0; k + 1 < run.autocorrelation.size(); k += 2) {
    const ResultRow& m = run.autocorrelation[k];
    const ResultRow& e = run.autocorrelation[k + 1];
    report(std::fabs(m.estimate - e.estimate) <= 3.0 * m.std_error,
           fmt("vacf(t=%.3g) = %.5f expected %.5f", m.t, m.estimate, e.estimate));
  }
  for (std::size_t k = 0; k + 2 < run.duhamel.size(); k += 3) {
    const ResultRow& du = run.duhamel[k];
    const ResultRow& jp = run.duhamel[k + 1];
    const ResultRow& tr = run.duhamel[k + 2];
    const double tol = 3.0 * combined_error(du.std_error, jp.std_error) + tr.estimate;
    report(std::fabs(du.estimate - jp.estimate) <= tol,
           du.observable + fmt(" = %.5f vs jump %.5f (tol %.2g)", du.estimate, jp.estimate, tol));
  }
  return check && !ok ? kCheckFailed : kOk;
}

std::optional<fs::path> default_baseline(const std::string& config_path) {
  if (config_path.empty()) return std::nullopt;
  fs::path p(config_path);
  p.replace_filename(p.stem().string() + "_baseline.csv");
  if (fs::exists(p)) return p;
  return std::nullopt;
}

int cmd_converge(const Globals& g, bool check, const std::string& baseline_arg, const std::string& dump) {
  const ExperimentConfig c = resolve(g);
  if (!dump.empty()) {
    const auto phis = select_observables(c.dim, c.observables);
    if (std::none_of(phis.begin(), phis.end(), [&](const Observable& phi) { return phi.name == dump; })) {
      throw ConfigError("dump-raw", "observable " + dump + " is not selected");
    }
  }
  ConvergenceOptions options;
  options.dump_observable = dump;
  const ConvergenceResult res = run_convergence(c, options);
  const fs::path out = c.output_dir;
  write_csv(out / "converge.csv", res.unfiltered);
  write_csv(out / "converge_filtered.csv", res.filtered);
  write_csv(out / "converge_gap.csv", res.gap);
  write_csv(out / "converge_mass_gap.csv", res.mass_gap);
  nlohmann::json params = to_json(c);
  params["bound_violation"] = res.bound_violation;
  write_metadata(out / "converge.json", "converge", params);
  if (!dump.empty()) {
    std::string text = "eps,t,observable,sample,value\n";
    char buf[96];
    for (const RawColumn& col : res.raw) {
      for (std::size_t i = 0; i < col.values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,", col.eps, col.t);
        text += buf + col.observable;
        std::snprintf(buf, sizeof buf, ",%zu,%.17g\n", i, col.values[i]);
        text += buf;
      }
    }
    write_text(out / ("raw_" + dump + ".csv"), text);
  }

  std::printf("%-8s %-6s %-12s %12s %12s %12s %10s\n", "eps", "t", "observable", "F_eps", "filtered", "gap",
              "gap_se");
  for (std::size_t k = 0; k < res.gap.size(); ++k) {
    const ResultRow& gap = res.gap[k];
    std::printf("%-8g %-6g %-12s %12.6f %12.6f %12.6f %10.2g\n", gap.eps, gap.t, gap.observable.c_str(),
                res.unfiltered[k].estimate, res.filtered[k].estimate, gap.estimate, gap.std_error);
  }
  if (!check) return kOk;

  bool ok = true;
  auto report = [&](bool pass, const std::string& text) {
    ok = ok && pass;
    print_line(pass ? "PASS" : "FAIL", text);
  };
  report(res.bound_violation <= 1e-12,
         fmt("|unfiltered - filtered| <= mass_gap * sup|phi| (max excess %.3g)", res.bound_violation));

  std::optional<fs::path> baseline = baseline_arg.empty() ? default_baseline(g.config_path) : fs::path(baseline_arg);
  if (!baseline) {
    print_line("INFO", "no regression baseline found");
  } else {
    const ResultTable base = read_csv(*baseline);
    std::size_t matched = 0, failed = 0;
    for (const ResultRow& b : base) {
      bool found = false;
      for (const ResultRow& r : res.unfiltered) {
        if (r.eps != b.eps || r.t != b.t || r.observable != b.observable) continue;
        found = true;
        ++matched;
        const double tol = 3.0 * std::max(b.std_error, 1e-12);
        if (!(std::fabs(r.estimate - b.estimate) <= tol)) {
          ++failed;
          print_line("FAIL", b.observable + fmt(" eps=%g t=%g: %.8g vs baseline %.8g", b.eps, b.t, r.estimate,
                                                 b.estimate));
        }
      }
      if (!found) {
        ++failed;
        print_line("FAIL", b.observable + fmt(" eps=%g t=%g missing from this run", b.eps, b.t));
      }
    }
    report(failed == 0 && matched > 0, "regression against " + baseline->string() + ": " + std::to_string(matched) +
                                           " rows, " + std::to_string(failed) + " outside 3 SE");
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_mass(const Globals& g, bool check) {
  const ExperimentConfig c = resolve(g);
  const ResultTable rows = run_mass_check(c);
  const fs::path out = c.output_dir;
  write_csv(out / "mass.csv", rows);
  write_metadata(out / "mass.json", "mass", to_json(c));
  for (const ResultRow& r : rows) {
    std::printf("eps=%-6g t=%-5g %-24s %.6g +- %.2g\n", r.eps, r.t, r.observable.c_str(), r.estimate, r.std_error);
  }
  if (!check) return kOk;
  bool ok = true;
  auto value = [&](double eps, double t, const char* name) {
    for (const ResultRow& r : rows) {
      if (r.eps == eps && r.t == t && r.observable == name) return r.estimate;
    }
    return std::nan("");
  };
  for (double eps : c.eps_list) {
    for (double t : c.t_eval) {
      const double u = value(eps, t, "mass_unfiltered"), s = value(eps, t, "mass_separated"),
                   f = value(eps, t, "mass_filtered");
      const bool pass = f <= s && s <= u && u <= 1.0;
      ok = ok && pass;
      print_line(pass ? "PASS" : "FAIL",
                 fmt("eps=%g t=%g: ", eps, t) + fmt("filtered %.6g <= separated %.6g <= unfiltered %.6g <= 1", f, s, u));
    }
  }
  for (double t : c.t_eval) {
    const bool pass = value(0.0, t, "mass") == 1.0;
    ok = ok && pass;
    print_line(pass ? "PASS" : "FAIL", fmt("jump process mass at t=%g is 1", t));
  }
  return ok ? kOk : kCheckFailed;
}

ResultTable read_any_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  if (header.rfind("t,observable,estimate,stderr", 0) != 0) return read_csv(path);
  ResultTable rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string t, name, est, se;
    std::getline(ss, t, ',');
    std::getline(ss, name, ',');
    std::getline(ss, est, ',');
    std::getline(ss, se, ',');
    try {
      rows.push_back({0.0, std::stod(t), name, std::stod(est), std::stod(se), 0, 0});
    } catch (const std::logic_error&) {
      throw IoError("malformed series row: " + line);
    }
  }
  return rows;
}

int cmd_plot(const std::string& input, const std::string& output, const PlotOptions& options,
             const std::vector<std::string>& only) {
  ResultTable rows = read_any_table(input);
  if (!only.empty()) {
    std::erase_if(rows, [&](const ResultRow& r) {
      return std::find(only.begin(), only.end(), r.observable) == only.end();
    });
  }
  write_text(output, render_svg(rows, options));
  std::printf("wrote %s\n", output.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments for the Lorentz gas in the Boltzmann-Grad limit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);
  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Override the master seed");
  app.add_option("--config", g.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--threads", g.threads, "Worker threads (default: LORENTZ_BG_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Output directory (overrides output_dir)");

  double eps = 0.0, radius = 0.0, intensity = -1.0;
  auto* sample = app.add_subcommand("sample", "Draw one Poisson obstacle configuration");
  sample->add_option("--eps", eps, "Obstacle radius (default: first eps_list entry)");
  sample->add_option("--radius", radius, "Sampling ball radius (default: R + T + 2 eps)");
  sample->add_option("--intensity", intensity, "Intensity (default: eps^{1-d})");

  double t_trace = -1.0;
  std::string x_text = "0,0", v_text = "1,0";
  std::size_t n_trace = 1;
  auto* trace = app.add_subcommand("trace", "Record billiard trajectories from one start point");
  trace->add_option("--eps", eps, "Obstacle radius (default: first eps_list entry)");
  trace->add_option("--t", t_trace, "Flight time (default: T)");
  trace->add_option("--x", x_text, "Start position, comma separated");
  trace->add_option("--v", v_text, "Unit start velocity, comma separated");
  trace->add_option("--n", n_trace, "Number of independent configurations");

  auto* green = app.add_subcommand("green", "Estimate the filtered Green function at a fixed start");
  bool check = false;
  auto* boltz = app.add_subcommand("boltzmann", "Run the linear Boltzmann jump process and Duhamel series");
  boltz->add_flag("--check", check, "Exit 4 unless the statistical checks pass");

  std::string baseline, dump;
  auto* converge = app.add_subcommand("converge", "Compare F_eps(t) with the limit semigroup over eps_list");
  converge->add_flag("--check", check, "Exit 4 on regression or a violated bound");
  converge->add_option("--baseline", baseline, "Regression baseline CSV (default: <config>_baseline.csv)");
  converge->add_option("--dump-raw", dump, "Write per-sample values of this observable");

  auto* mass = app.add_subcommand("mass", "Mass and mass-deficiency estimates");
  mass->add_flag("--check", check, "Exit 4 unless the mass ordering holds");

  std::string input, output;
  PlotOptions plot_options;
  std::vector<std::string> only;
  auto* plot = app.add_subcommand("plot", "Render a result or series CSV as SVG");
  plot->add_option("--input", input, "CSV produced by another subcommand")->required()->check(CLI::ExistingFile);
  plot->add_option("--output", output, "SVG path")->required();
  plot->add_option("--title", plot_options.title, "Plot title");
  plot->add_option("--x-axis", plot_options.x_axis, "eps or t")->check(CLI::IsMember({"eps", "t"}));
  plot->add_flag("--log-x", plot_options.log_x, "Logarithmic abscissa");
  plot->add_option("--observable", only, "Restrict to these observables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*sample) return cmd_sample(g, eps, radius, intensity);
    if (*trace) return cmd_trace(g, eps, t_trace, x_text, v_text, n_trace);
    if (*green) return cmd_green(g);
    if (*boltz) return cmd_boltzmann(g, check);
    if (*converge) return cmd_converge(g, check, baseline, dump);
    if (*mass) return cmd_mass(g, check);
    if (*plot) return cmd_plot(input, output, plot_options, only);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kRuntimeError;
}
