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

#include "lorentz_bg/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "lorentz_bg/errors.hpp"
#include "lorentz_bg/observables.hpp"

namespace lorentz_bg::harness {
namespace {

using nlohmann::json;

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& j, const std::string& prefix, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(prefix, "expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(join(prefix, key), "unknown key");
  }
}

template <class T>
void read(const json& j, const std::string& prefix, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(join(prefix, key), std::string("wrong type: ") + e.what());
  }
}

void read_count(const json& j, const std::string& prefix, const char* key, std::size_t& out) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
    out = v.get<std::size_t>();
  } else if (v.is_number_float() && v.get<double>() >= 0.0 && std::floor(v.get<double>()) == v.get<double>()) {
    out = static_cast<std::size_t>(v.get<double>());
  } else {
    throw ConfigError(join(prefix, key), "expected a non-negative integer");
  }
}

Vec read_vec(const json& j, const std::string& field, int dim) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim)) {
    throw ConfigError(field, "expected an array of " + std::to_string(dim) + " numbers");
  }
  Vec out{0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) {
    if (!j[k].is_number()) throw ConfigError(field, "expected numbers");
    out[k] = j[k].get<double>();
  }
  return out;
}

void read_point(const json& j, const std::string& prefix, int dim, PhasePoint& out) {
  if (!j.contains("z")) return;
  const std::string field = join(prefix, "z");
  const json& z = j.at("z");
  reject_unknown(z, field, {"x", "v"});
  if (z.contains("x")) out.x = read_vec(z.at("x"), field + ".x", dim);
  if (z.contains("v")) out.v = read_vec(z.at("v"), field + ".v", dim);
}

json point_json(const PhasePoint& z, int dim) {
  json x = json::array(), v = json::array();
  for (int k = 0; k < dim; ++k) {
    x.push_back(z.x[k]);
    v.push_back(z.v[k]);
  }
  return {{"x", x}, {"v", v}};
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

bool unit(const Vec& v) { return std::fabs(norm(v) - 1.0) <= 1e-9; }

}  // namespace

PhasePoint sample_initial(const InitialDatum& datum, int dim, Rng& rng) {
  if (datum.kind != "bump") throw InvalidParameter("unknown initial datum kind: " + datum.kind);
  Vec x;
  for (;;) {
    x = uniform_in_ball(rng, dim, datum.radius);
    const double s = 1.0 - norm2(x) / (datum.radius * datum.radius);
    if (rng.uniform() < s * s * s) break;
  }
  return {x, uniform_direction(rng, dim)};
}

void ExperimentConfig::validate() const {
  require(dim == 2 || dim == 3, "dim", "must be 2 or 3");
  require(!eps_list.empty(), "eps_list", "must not be empty");
  for (double e : eps_list) require(std::isfinite(e) && e > 0.0 && e < 1.0, "eps_list", "entries must lie in (0, 1)");
  require(std::isfinite(R) && R > 0.0, "R", "must be finite and positive");
  require(std::isfinite(T) && T > 0.0, "T", "must be finite and positive");
  require(!t_eval.empty(), "t_eval", "must not be empty");
  for (double t : t_eval) require(finite_nonneg(t) && t <= T, "t_eval", "entries must lie in [0, T]");
  require(n_configs >= 2, "n_configs", "must be at least 2");
  require(n_particles >= 2, "n_particles", "must be at least 2");
  require(initial_datum.kind == "bump", "initial_datum.kind", "only \"bump\" is supported");
  require(std::isfinite(initial_datum.radius) && initial_datum.radius > 0.0 && initial_datum.radius <= R,
          "initial_datum.radius", "must lie in (0, R]");
  try {
    select_observables(dim, observables);
  } catch (const InvalidParameter& e) {
    throw ConfigError("observables", e.what());
  }

  require(unit(green.z.v), "green.z.v", "must be a unit vector");
  require(std::isfinite(green.R) && green.R >= 0.0, "green.R", "must be finite and non-negative");
  require(std::isfinite(green.T) && green.T > 0.0, "green.T", "must be finite and positive");
  require(finite_nonneg(green.t) && green.t <= green.T, "green.t", "must lie in [0, green.T]");
  require(norm(green.z.x) <= green.R + green.T - green.t + 1e-9, "green.z.x", "must satisfy |x| <= R + T - t");
  require(green.n_samples >= 2, "green.n_samples", "must be at least 2");
  require(green.n_outer >= 2, "green.n_outer", "must be at least 2");
  require(green.n_inner >= 1, "green.n_inner", "must be at least 1");

  require(unit(boltzmann.z.v), "boltzmann.z.v", "must be a unit vector");
  require(finite_nonneg(boltzmann.t), "boltzmann.t", "must be finite and non-negative");
  double prev = 0.0;
  for (double t : boltzmann.autocorrelation_times) {
    require(finite_nonneg(t) && t >= prev, "boltzmann.autocorrelation_times", "must be non-negative and ascending");
    prev = t;
  }
  require(boltzmann.n_scatters >= 100, "boltzmann.n_scatters", "must be at least 100");
  require(boltzmann.n_mc >= 2, "boltzmann.n_mc", "must be at least 2");
}

ExperimentConfig parse_config(const json& j) {
  reject_unknown(j, "", {"dim", "eps_list", "R", "T", "t_eval", "n_configs", "n_particles", "seed",
                         "initial_datum", "observables", "output_dir", "zero_intensity", "green", "boltzmann"});
  ExperimentConfig c;
  if (j.contains("dim") && !j.at("dim").is_number_integer()) throw ConfigError("dim", "expected an integer");
  read(j, "", "dim", c.dim);
  require(c.dim == 2 || c.dim == 3, "dim", "must be 2 or 3");
  read(j, "", "eps_list", c.eps_list);
  read(j, "", "R", c.R);
  read(j, "", "T", c.T);
  read(j, "", "t_eval", c.t_eval);
  read_count(j, "", "n_configs", c.n_configs);
  read_count(j, "", "n_particles", c.n_particles);
  std::size_t seed = c.seed;
  read_count(j, "", "seed", seed);
  c.seed = seed;
  read(j, "", "observables", c.observables);
  read(j, "", "output_dir", c.output_dir);
  read(j, "", "zero_intensity", c.zero_intensity);

  if (j.contains("initial_datum")) {
    const json& d = j.at("initial_datum");
    reject_unknown(d, "initial_datum", {"kind", "radius"});
    read(d, "initial_datum", "kind", c.initial_datum.kind);
    read(d, "initial_datum", "radius", c.initial_datum.radius);
  }
  if (j.contains("green")) {
    const json& g = j.at("green");
    reject_unknown(g, "green", {"z", "t", "R", "T", "n_samples", "n_outer", "n_inner"});
    read_point(g, "green", c.dim, c.green.z);
    read(g, "green", "t", c.green.t);
    read(g, "green", "R", c.green.R);
    read(g, "green", "T", c.green.T);
    read_count(g, "green", "n_samples", c.green.n_samples);
    read_count(g, "green", "n_outer", c.green.n_outer);
    read_count(g, "green", "n_inner", c.green.n_inner);
  }
  if (j.contains("boltzmann")) {
    const json& b = j.at("boltzmann");
    reject_unknown(b, "boltzmann",
                   {"z", "t", "autocorrelation_times", "n_scatters", "n_max", "n_mc", "snapshot_particles"});
    read_point(b, "boltzmann", c.dim, c.boltzmann.z);
    read(b, "boltzmann", "t", c.boltzmann.t);
    read(b, "boltzmann", "autocorrelation_times", c.boltzmann.autocorrelation_times);
    read_count(b, "boltzmann", "n_scatters", c.boltzmann.n_scatters);
    read_count(b, "boltzmann", "n_max", c.boltzmann.n_max);
    read_count(b, "boltzmann", "n_mc", c.boltzmann.n_mc);
    read_count(b, "boltzmann", "snapshot_particles", c.boltzmann.snapshot_particles);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  return {
      {"dim", c.dim},
      {"eps_list", c.eps_list},
      {"R", c.R},
      {"T", c.T},
      {"t_eval", c.t_eval},
      {"n_configs", c.n_configs},
      {"n_particles", c.n_particles},
      {"seed", c.seed},
      {"initial_datum", {{"kind", c.initial_datum.kind}, {"radius", c.initial_datum.radius}}},
      {"observables", c.observables},
      {"output_dir", c.output_dir},
      {"zero_intensity", c.zero_intensity},
      {"green",
       {{"z", point_json(c.green.z, c.dim)},
        {"t", c.green.t},
        {"R", c.green.R},
        {"T", c.green.T},
        {"n_samples", c.green.n_samples},
        {"n_outer", c.green.n_outer},
        {"n_inner", c.green.n_inner}}},
      {"boltzmann",
       {{"z", point_json(c.boltzmann.z, c.dim)},
        {"t", c.boltzmann.t},
        {"autocorrelation_times", c.boltzmann.autocorrelation_times},
        {"n_scatters", c.boltzmann.n_scatters},
        {"n_max", c.boltzmann.n_max},
        {"n_mc", c.boltzmann.n_mc},
        {"snapshot_particles", c.boltzmann.snapshot_particles}}},
  };
}

}  // namespace lorentz_bg::harness
