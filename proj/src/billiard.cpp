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

#include "lorentz_bg/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "lorentz_bg/errors.hpp"

namespace lorentz_bg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxCells = std::size_t{1} << 27;

struct Candidate {
  double tau = kInf;
  ObstacleId id = std::numeric_limits<ObstacleId>::max();

  void offer(double t, ObstacleId i) {
    if (t < tau || (t == tau && i < id)) {
      tau = t;
      id = i;
    }
  }
  bool found() const { return tau < kInf; }
};

// Smaller root of |x + t v - c|^2 = eps^2 in the cancellation-free form
// b = (c - x).v, disc = eps^2 - |c - x - b v|^2, tau = b - sqrt(disc).
// The obstacle just reflected from needs tau > kDepartureTolerance; any other
// obstacle is hit when it lies ahead and the root is not behind the start,
// which also covers a start on its surface moving inward (tau = 0).
bool ray_hits(const PhasePoint& z, const Vec& c, double eps2, bool departing, double& tau) {
  const Vec w = c - z.x;
  const double b = dot(w, z.v);
  const double disc = eps2 - norm2(w - b * z.v);
  if (disc <= kTangencyTolerance) return false;
  const double root = b - std::sqrt(disc);
  if (departing) {
    if (!(root > kDepartureTolerance)) return false;
    tau = root;
    return true;
  }
  if (b <= 0.0 || root <= -kDepartureTolerance) return false;
  tau = std::max(root, 0.0);
  return true;
}

std::optional<Hit> make_hit(const PhasePoint& z, const PointConfiguration& config,
                            const Candidate& best, double horizon) {
  if (!best.found() || best.tau > horizon) return std::nullopt;
  const Vec at = z.x + best.tau * z.v;
  return Hit{best.tau, best.id, normalized(at - config.centers[best.id])};
}

std::optional<Hit> brute_scan(const PhasePoint& z, const PointConfiguration& config, double eps,
                              double horizon, std::optional<ObstacleId> departing) {
  const double eps2 = eps * eps;
  Candidate best;
  for (std::size_t i = 0; i < config.size(); ++i) {
    const auto id = static_cast<ObstacleId>(i);
    double tau = 0.0;
    if (ray_hits(z, config.centers[i], eps2, departing && *departing == id, tau)) best.offer(tau, id);
  }
  return make_hit(z, config, best, horizon);
}

// Amanatides-Woo traversal of the cells pierced by the ray on [0, horizon].
// Stops at the first cell whose exit parameter is beyond the best root found,
// since every obstacle hit earlier is registered in an already visited cell.
std::optional<Hit> grid_scan(const PhasePoint& z, const PointConfiguration& config,
                             const SpatialGrid& grid, double eps, double horizon,
                             std::optional<ObstacleId> departing) {
  if (grid.cell_count() == 0 || config.empty()) return std::nullopt;
  const int dim = grid.dim();
  const double h = grid.cell_size();
  const Vec& lo = grid.origin();
  const auto& n = grid.extent();

  double t_enter = 0.0;
  double t_leave = horizon;
  for (int a = 0; a < dim; ++a) {
    const double hi = lo[a] + n[a] * h;
    if (z.v[a] == 0.0) {
      if (z.x[a] < lo[a] || z.x[a] > hi) return std::nullopt;
      continue;
    }
    double ta = (lo[a] - z.x[a]) / z.v[a];
    double tb = (hi - z.x[a]) / z.v[a];
    if (ta > tb) std::swap(ta, tb);
    t_enter = std::max(t_enter, ta);
    t_leave = std::min(t_leave, tb);
  }
  if (t_enter > t_leave) return std::nullopt;

  std::array<int, 3> idx{0, 0, 0};
  std::array<int, 3> step{0, 0, 0};
  std::array<double, 3> t_max{kInf, kInf, kInf};
  std::array<double, 3> t_delta{kInf, kInf, kInf};
  const Vec p = z.x + t_enter * z.v;
  for (int a = 0; a < dim; ++a) {
    const int i = static_cast<int>(std::floor((p[a] - lo[a]) / h));
    idx[a] = std::clamp(i, 0, n[a] - 1);
    if (z.v[a] > 0.0) {
      step[a] = 1;
      t_max[a] = (lo[a] + (idx[a] + 1) * h - z.x[a]) / z.v[a];
      t_delta[a] = h / z.v[a];
    } else if (z.v[a] < 0.0) {
      step[a] = -1;
      t_max[a] = (lo[a] + idx[a] * h - z.x[a]) / z.v[a];
      t_delta[a] = -h / z.v[a];
    }
  }

  const double eps2 = eps * eps;
  Candidate best;
  for (;;) {
    int axis = 0;
    for (int a = 1; a < dim; ++a) {
      if (t_max[a] < t_max[axis]) axis = a;
    }
    const double t_exit = t_max[axis];
    if (const auto cell = grid.cell_index(idx)) {
      for (ObstacleId id : grid.cell(*cell)) {
        double tau = 0.0;
        if (ray_hits(z, config.centers[id], eps2, departing && *departing == id, tau)) best.offer(tau, id);
      }
    }
    if (best.found() && best.tau <= t_exit) break;
    if (t_exit >= t_leave) break;
    idx[axis] += step[axis];
    if (idx[axis] < 0 || idx[axis] >= n[axis]) break;
    t_max[axis] += t_delta[axis];
  }
  return make_hit(z, config, best, horizon);
}

void check_start(const PhasePoint& z, const PointConfiguration& config, double eps, double horizon) {
  if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
  if (!(horizon > 0.0)) throw InvalidParameter("horizon must be positive");
  const double inner = eps * eps * (1.0 - 1e-12);
  for (const Vec& c : config.centers) {
    if (norm2(z.x - c) < inner) throw PreconditionViolation("start point lies strictly inside an obstacle");
  }
}

template <typename Finder, typename Occupancy>
TrajectoryResult flow_impl(const PhasePoint& z, double t, double eps, const FlowOptions& options,
                           Finder&& find, Occupancy&& occupancy) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("flow time must be finite and >= 0");
  if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
  TrajectoryResult out;
  out.endpoint = z;
  if (occupancy(z.x) == 0) {
    out.started_in_table = 0;
    return out;
  }
  PhasePoint cur = z;
  double elapsed = 0.0;
  std::optional<ObstacleId> departing;
  while (elapsed < t) {
    const double remaining = t - elapsed;
    const auto hit = find(cur, remaining, departing);
    if (!hit) {
      cur.x += remaining * cur.v;
      break;
    }
    elapsed += hit->tau;
    cur.x += hit->tau * cur.v;
    cur.v = reflect(cur.v, hit->normal);
    out.collision_times.push_back(elapsed);
    out.obstacle_ids.push_back(hit->id);
    if (options.record_path) out.collision_states.push_back(cur);
    departing = hit->id;
    if (out.collision_times.size() > options.max_collisions) {
      throw RunawayTrajectory("collision count exceeded " + std::to_string(options.max_collisions));
    }
  }
  out.endpoint = cur;
  out.n_collisions = out.collision_times.size();
  out.recollision_free = recollision_filter(out);
  return out;
}

}  // namespace

std::size_t SpatialGrid::occupied_cell_count() const {
  std::size_t k = 0;
  for (std::size_t i = 0; i < cell_count(); ++i) k += offsets_[i + 1] > offsets_[i] ? 1 : 0;
  return k;
}

std::optional<std::size_t> SpatialGrid::cell_index(const std::array<int, 3>& cell) const {
  for (int a = 0; a < 3; ++a) {
    if (cell[a] < 0 || cell[a] >= extent_[a]) return std::nullopt;
  }
  return (static_cast<std::size_t>(cell[2]) * extent_[1] + cell[1]) * extent_[0] + cell[0];
}

std::array<int, 3> SpatialGrid::cell_coords(std::size_t index) const {
  std::array<int, 3> c{};
  c[0] = static_cast<int>(index % extent_[0]);
  index /= extent_[0];
  c[1] = static_cast<int>(index % extent_[1]);
  c[2] = static_cast<int>(index / extent_[1]);
  return c;
}

std::optional<std::size_t> SpatialGrid::locate(const Vec& p) const {
  std::array<int, 3> c{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double f = std::floor((p[a] - origin_[a]) / cell_size_);
    if (f < 0.0 || f >= extent_[a]) return std::nullopt;
    c[a] = static_cast<int>(f);
  }
  return cell_index(c);
}

double default_cell_size(const PointConfiguration& config, double eps) {
  return std::max(4.0 * eps, config.sample_radius / 64.0);
}

SpatialGrid build_grid(const PointConfiguration& config, double eps, std::optional<double> cell_size) {
  if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
  SpatialGrid grid;
  grid.dim_ = config.dim;
  grid.cell_size_ = cell_size.value_or(default_cell_size(config, eps));
  if (!(grid.cell_size_ > 0.0)) throw InvalidParameter("cell size must be positive");
  const double half = config.sample_radius + eps;
  std::size_t cells = 1;
  for (int a = 0; a < 3; ++a) {
    if (a < config.dim) {
      grid.origin_[a] = -half;
      grid.extent_[a] = std::max(1, static_cast<int>(std::ceil(2.0 * half / grid.cell_size_)));
    } else {
      grid.origin_[a] = -0.5 * grid.cell_size_;
      grid.extent_[a] = 1;
    }
    cells *= static_cast<std::size_t>(grid.extent_[a]);
  }
  if (cells > kMaxCells) throw ResourceLimit("spatial grid would need " + std::to_string(cells) + " cells");

  const double h = grid.cell_size_;
  const double eps2 = eps * eps;
  // Visits cells whose closed box lies at distance < eps from the center.
  auto for_each_cell = [&](const Vec& c, auto&& visit) {
    std::array<int, 3> lo_i{0, 0, 0}, hi_i{0, 0, 0};
    for (int a = 0; a < config.dim; ++a) {
      lo_i[a] = std::max(0, static_cast<int>(std::floor((c[a] - eps - grid.origin_[a]) / h)));
      hi_i[a] = std::min(grid.extent_[a] - 1, static_cast<int>(std::floor((c[a] + eps - grid.origin_[a]) / h)));
    }
    for (int k = lo_i[2]; k <= hi_i[2]; ++k) {
      for (int j = lo_i[1]; j <= hi_i[1]; ++j) {
        for (int i = lo_i[0]; i <= hi_i[0]; ++i) {
          const std::array<int, 3> cell{i, j, k};
          double d2 = 0.0;
          for (int a = 0; a < config.dim; ++a) {
            const double b0 = grid.origin_[a] + cell[a] * h;
            const double d = c[a] < b0 ? b0 - c[a] : (c[a] > b0 + h ? c[a] - b0 - h : 0.0);
            d2 += d * d;
          }
          if (d2 < eps2) visit(*grid.cell_index(cell));
        }
      }
    }
  };

  grid.offsets_.assign(cells + 1, 0);
  for (const Vec& c : config.centers) for_each_cell(c, [&](std::size_t cell) { ++grid.offsets_[cell + 1]; });
  for (std::size_t i = 0; i < cells; ++i) grid.offsets_[i + 1] += grid.offsets_[i];
  grid.ids_.resize(grid.offsets_.back());
  std::vector<std::uint32_t> cursor(grid.offsets_.begin(), grid.offsets_.end() - 1);
  for (std::size_t id = 0; id < config.size(); ++id) {
    for_each_cell(config.centers[id], [&](std::size_t cell) { grid.ids_[cursor[cell]++] = static_cast<ObstacleId>(id); });
  }
  return grid;
}

std::optional<Hit> first_collision(const PhasePoint& z, const PointConfiguration& config,
                                   const SpatialGrid& grid, double eps, double horizon) {
  check_start(z, config, eps, horizon);
  return grid_scan(z, config, grid, eps, horizon, std::nullopt);
}

std::optional<Hit> first_collision_brute(const PhasePoint& z, const PointConfiguration& config,
                                         double eps, double horizon) {
  check_start(z, config, eps, horizon);
  return brute_scan(z, config, eps, horizon, std::nullopt);
}

Vec reflect(const Vec& v, const Vec& normal) { return normalized(v - 2.0 * dot(v, normal) * normal); }

TrajectoryResult flow(const PhasePoint& z, double t, const PointConfiguration& config,
                      const SpatialGrid& grid, double eps, const FlowOptions& options) {
  return flow_impl(
      z, t, eps, options,
      [&](const PhasePoint& p, double horizon, std::optional<ObstacleId> departing) {
        return grid_scan(p, config, grid, eps, horizon, departing);
      },
      [&](const Vec& x) { return occupancy_indicator(x, config, grid, eps); });
}

TrajectoryResult flow_brute(const PhasePoint& z, double t, const PointConfiguration& config, double eps,
                            const FlowOptions& options) {
  return flow_impl(
      z, t, eps, options,
      [&](const PhasePoint& p, double horizon, std::optional<ObstacleId> departing) {
        return brute_scan(p, config, eps, horizon, departing);
      },
      [&](const Vec& x) { return occupancy_indicator(x, config, eps); });
}

int recollision_filter(const TrajectoryResult& record) {
  std::vector<ObstacleId> ids = record.obstacle_ids;
  std::sort(ids.begin(), ids.end());
  return std::adjacent_find(ids.begin(), ids.end()) == ids.end() ? 1 : 0;
}

int occupancy_indicator(const Vec& x, const PointConfiguration& config, const SpatialGrid& grid, double eps) {
  const auto cell = grid.locate(x);
  if (!cell) return 1;
  const double e2 = eps * eps;
  for (ObstacleId id : grid.cell(*cell)) {
    if (norm2(x - config.centers[id]) < e2) return 0;
  }
  return 1;
}

void write_trajectory_csv_header(std::ostream& out, int dim) {
  out << "sample_id,j,tau_j,obstacle_id";
  for (int a = 1; a <= dim; ++a) out << ",x" << a;
  for (int a = 1; a <= dim; ++a) out << ",v" << a;
  out << '\n';
}

void write_trajectory_csv(std::ostream& out, std::size_t sample_id, const TrajectoryResult& record, int dim) {
  const auto old = out.precision(17);
  for (std::size_t j = 0; j < record.collision_times.size(); ++j) {
    out << sample_id << ',' << (j + 1) << ',' << record.collision_times[j] << ',' << record.obstacle_ids[j];
    const PhasePoint& s = record.collision_states.at(j);
    for (int a = 0; a < dim; ++a) out << ',' << s.x[a];
    for (int a = 0; a < dim; ++a) out << ',' << s.v[a];
    out << '\n';
  }
  out.precision(old);
}

}  // namespace lorentz_bg
