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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "lorentz_bg/billiard.hpp"
#include "lorentz_bg/boltzmann.hpp"
#include "lorentz_bg/errors.hpp"
#include "lorentz_bg/greenfn.hpp"
#include "lorentz_bg/harness/config.hpp"
#include "lorentz_bg/harness/experiments.hpp"
#include "lorentz_bg/harness/output.hpp"
#include "lorentz_bg/harness/plot.hpp"
#include "lorentz_bg/observables.hpp"
#include "lorentz_bg/parallel.hpp"
#include "lorentz_bg/poisson.hpp"
#include "lorentz_bg/stats.hpp"

namespace py = pybind11;
using namespace lorentz_bg;

namespace {

Vec to_vec(const std::vector<double>& x) {
  if (x.size() != 2 && x.size() != 3) throw InvalidParameter("vectors must have 2 or 3 components");
  Vec v;
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = x[i];
  return v;
}

std::vector<double> from_vec(const Vec& v, int dim) { return {v.c.begin(), v.c.begin() + dim}; }

PhasePoint to_point(const std::vector<double>& x, const std::vector<double>& v) {
  if (x.size() != v.size()) throw InvalidParameter("x and v must have the same dimension");
  return {to_vec(x), to_vec(v)};
}

Observable find_observable(int dim, const std::string& name) { return select_observables(dim, {name}).front(); }

py::dict estimate_dict(const Estimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["std_error"] = e.std_error;
  d["n"] = e.n;
  return d;
}

py::list rows_list(const harness::ResultTable& rows) {
  py::list out;
  for (const harness::ResultRow& r : rows) {
    py::dict d;
    d["eps"] = r.eps;
    d["t"] = r.t;
    d["observable"] = r.observable;
    d["estimate"] = r.estimate;
    d["stderr"] = r.std_error;
    d["n_samples"] = r.n;
    d["seed"] = r.seed;
    out.append(d);
  }
  return out;
}

harness::ResultTable rows_from(const py::list& rows) {
  harness::ResultTable out;
  for (const py::handle& h : rows) {
    const py::dict d = h.cast<py::dict>();
    harness::ResultRow r;
    r.eps = d["eps"].cast<double>();
    r.t = d["t"].cast<double>();
    r.observable = d["observable"].cast<std::string>();
    r.estimate = d["estimate"].cast<double>();
    r.std_error = d.contains("stderr") ? d["stderr"].cast<double>() : 0.0;
    r.n = d.contains("n_samples") ? d["n_samples"].cast<std::size_t>() : 0;
    r.seed = d.contains("seed") ? d["seed"].cast<std::uint64_t>() : 0;
    out.push_back(r);
  }
  return out;
}

harness::ExperimentConfig config_from(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return harness::parse_config(j);
}

}  // namespace

PYBIND11_MODULE(lorentz_bg, m) {
  m.doc() = "Lorentz gas Monte Carlo in the Boltzmann-Grad limit";

  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

  m.def("code_version", &harness::code_version);
  m.def("thread_count", &thread_count);
  m.def("set_thread_count", &set_thread_count, py::arg("threads"));

  py::class_<Stream>(m, "Stream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("split", py::overload_cast<std::uint64_t>(&Stream::split, py::const_), py::arg("index"))
      .def("split", py::overload_cast<std::string_view>(&Stream::split, py::const_), py::arg("tag"))
      .def_property_readonly("key", &Stream::key)
      .def("__eq__", [](const Stream& a, const Stream& b) { return a == b; });

  py::class_<PointConfiguration>(m, "PointConfiguration")
      .def_readonly("dim", &PointConfiguration::dim)
      .def_readonly("sample_radius", &PointConfiguration::sample_radius)
      .def_readonly("intensity", &PointConfiguration::intensity)
      .def_property_readonly("centers",
                             [](const PointConfiguration& c) {
                               std::vector<std::vector<double>> out;
                               for (const Vec& x : c.centers) out.push_back(from_vec(x, c.dim));
                               return out;
                             })
      .def("__len__", &PointConfiguration::size);

  m.def("boltzmann_grad_intensity", &boltzmann_grad_intensity, py::arg("dim"), py::arg("eps"));
  m.def(
      "sample_configuration",
      [](int dim, double intensity, double radius, const Stream& stream) {
        Rng rng(stream);
        return sample_configuration(dim, intensity, radius, rng);
      },
      py::arg("dim"), py::arg("intensity"), py::arg("radius"), py::arg("stream"));
  m.def(
      "occupancy_indicator",
      [](const std::vector<double>& x, const PointConfiguration& c, double eps) {
        return occupancy_indicator(to_vec(x), c, eps);
      },
      py::arg("x"), py::arg("config"), py::arg("eps"));
  m.def("min_separation_ok", &min_separation_ok, py::arg("config"), py::arg("eps"), py::arg("region_radius"));
  m.def("close_pair_count", &close_pair_count, py::arg("config"), py::arg("eps"), py::arg("region_radius"));
  m.def(
      "estimate_exclusion_probability",
      [](int dim, double eps, double intensity, double region, std::size_t n, const Stream& stream) {
        const ProbabilityEstimate p = estimate_exclusion_probability(dim, eps, intensity, region, n, stream);
        return py::make_tuple(p.estimate, p.std_error);
      },
      py::arg("dim"), py::arg("eps"), py::arg("intensity"), py::arg("region_radius"), py::arg("n_configs"),
      py::arg("stream"));

  m.def(
      "flow",
      [](const std::vector<double>& x, const std::vector<double>& v, double t, const PointConfiguration& c,
         double eps) {
        const TrajectoryResult r = flow(to_point(x, v), t, c, build_grid(c, eps), eps);
        const int dim = static_cast<int>(x.size());
        py::dict d;
        d["x"] = from_vec(r.endpoint.x, dim);
        d["v"] = from_vec(r.endpoint.v, dim);
        d["collision_times"] = r.collision_times;
        d["obstacle_ids"] = r.obstacle_ids;
        d["n_collisions"] = r.n_collisions;
        d["started_in_table"] = r.started_in_table;
        d["recollision_free"] = r.recollision_free;
        return d;
      },
      py::arg("x"), py::arg("v"), py::arg("t"), py::arg("config"), py::arg("eps"));

  m.def("observable_names", [](int dim) {
    std::vector<std::string> out;
    for (const Observable& o : default_dictionary(dim)) out.push_back(o.name);
    return out;
  });
  m.def(
      "evaluate_observable",
      [](const std::string& name, const std::vector<double>& x, const std::vector<double>& v) {
        return find_observable(static_cast<int>(x.size()), name)(to_point(x, v));
      },
      py::arg("name"), py::arg("x"), py::arg("v"));

  m.def(
      "scatter",
      [](const std::vector<double>& v, const std::vector<double>& h) {
        return from_vec(scatter(to_vec(v), to_vec(h)), static_cast<int>(v.size()));
      },
      py::arg("v"), py::arg("h"));
  m.def("mean_deflection_cosine", &mean_deflection_cosine, py::arg("dim"));
  m.def("kernel_total_mass", &kernel_total_mass, py::arg("dim"));
  m.def(
      "deflection_density_check",
      [](int dim, std::size_t n, const Stream& stream) {
        const DeflectionCheck c = deflection_density_check(dim, n, stream);
        py::dict d;
        d["chi2"] = c.chi2;
        d["dof"] = c.dof;
        d["p_value"] = c.p_value;
        d["symmetry_p_value"] = c.symmetry_p_value;
        d["frac_half_pi"] = c.frac_half_pi;
        d["frac_half_pi_se"] = c.frac_half_pi_se;
        d["counts"] = c.counts;
        d["expected"] = c.expected;
        d["bin_edges"] = c.bin_edges;
        return d;
      },
      py::arg("dim"), py::arg("n_samples"), py::arg("stream"));
  m.def(
      "velocity_autocorrelation",
      [](int dim, std::size_t n, const std::vector<double>& times, const Stream& stream) {
        py::list out;
        for (const Estimate& e : velocity_autocorrelation(dim, n, times, stream)) out.append(estimate_dict(e));
        return out;
      },
      py::arg("dim"), py::arg("n_particles"), py::arg("times"), py::arg("stream"));
  m.def(
      "jump_pairing",
      [](const std::string& name, double t, const std::vector<double>& x, const std::vector<double>& v,
         std::size_t n, const Stream& stream) {
        const int dim = static_cast<int>(x.size());
        ParticleEnsemble ens{dim, 0.0, std::vector<PhasePoint>(n, to_point(x, v))};
        ens = evolve_jump(std::move(ens), t, ScatterParams::for_dim(dim), stream);
        return estimate_dict(pair(ens, find_observable(dim, name)));
      },
      py::arg("observable"), py::arg("t"), py::arg("x"), py::arg("v"), py::arg("n_particles"), py::arg("stream"));
  m.def(
      "duhamel_eval",
      [](const std::string& name, double t, const std::vector<double>& x, const std::vector<double>& v,
         std::size_t n_max, std::size_t n_mc, const Stream& stream) {
        const int dim = static_cast<int>(x.size());
        const DuhamelResult r =
            duhamel_eval(find_observable(dim, name), t, to_point(x, v), ScatterParams::for_dim(dim), n_max, n_mc, stream);
        py::dict d;
        d["value"] = r.value;
        d["std_error"] = r.std_error;
        d["truncation_bound"] = r.truncation_bound;
        d["n"] = r.n;
        return d;
      },
      py::arg("observable"), py::arg("t"), py::arg("x"), py::arg("v"), py::arg("n_max"), py::arg("n_mc"),
      py::arg("stream"));

  m.def(
      "green_pairing",
      [](const std::string& name, double t, const std::vector<double>& x, const std::vector<double>& v, double eps,
         double R, double T, std::size_t n, const Stream& stream) {
        GreenParams p;
        p.dim = static_cast<int>(x.size());
        p.eps = eps;
        p.R = R;
        p.T = T;
        const EmpiricalMeasure measure = estimate_green(t, to_point(x, v), p, n, stream);
        py::dict d = estimate_dict(pair(measure, find_observable(p.dim, name)));
        d["mass"] = measure.mass();
        return d;
      },
      py::arg("observable"), py::arg("t"), py::arg("x"), py::arg("v"), py::arg("eps"), py::arg("R"), py::arg("T"),
      py::arg("n_samples"), py::arg("stream"));

  m.def(
      "parse_config", [](const std::string& text) { return harness::to_json(config_from(text)).dump(); },
      py::arg("json"), "Validates a JSON config and returns it with defaults filled in.");
  m.def(
      "run_convergence",
      [](const std::string& text) {
        const harness::ConvergenceResult r = harness::run_convergence(config_from(text));
        py::dict d;
        d["unfiltered"] = rows_list(r.unfiltered);
        d["filtered"] = rows_list(r.filtered);
        d["gap"] = rows_list(r.gap);
        d["mass_gap"] = rows_list(r.mass_gap);
        d["bound_violation"] = r.bound_violation;
        return d;
      },
      py::arg("json"));
  m.def(
      "run_mass_check", [](const std::string& text) { return rows_list(harness::run_mass_check(config_from(text))); },
      py::arg("json"));
  m.def(
      "run_green", [](const std::string& text) { return rows_list(harness::run_green(config_from(text))); },
      py::arg("json"));
  m.def(
      "results_csv",
      [](const py::list& rows) {
        std::ostringstream out;
        harness::write_csv(out, rows_from(rows));
        return out.str();
      },
      py::arg("rows"));
  m.def(
      "render_svg",
      [](const py::list& rows, const std::string& title, const std::string& x_axis, bool log_x) {
        return harness::render_svg(rows_from(rows), {title, x_axis, log_x});
      },
      py::arg("rows"), py::arg("title") = "", py::arg("x_axis") = "", py::arg("log_x") = false);
}
