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

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "lorentz_bg/poisson.hpp"
#include "lorentz_bg/vec.hpp"

namespace lorentz_bg {

using ObstacleId = std::uint32_t;

/// Discriminant at or below this is treated as a tangency and ignored.
inline constexpr double kTangencyTolerance = 1e-14;
/// Minimum root accepted against the obstacle just reflected from.
inline constexpr double kDepartureTolerance = 1e-12;

/// Uniform grid over the bounding cube of a configuration.
///
/// Obstacle ids are stored in every cell whose closed box meets the open
/// obstacle ball, so any ray segment inside a cell only needs that cell's list.
/// Immutable once built; safe to share across threads.
class SpatialGrid {
 public:
  int dim() const { return dim_; }
  double cell_size() const { return cell_size_; }
  const std::array<int, 3>& extent() const { return extent_; }
  const Vec& origin() const { return origin_; }

  std::size_t cell_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t occupied_cell_count() const;

  /// Flattened index of integer cell coordinates, or nullopt outside the grid.
  std::optional<std::size_t> cell_index(const std::array<int, 3>& cell) const;
  std::array<int, 3> cell_coords(std::size_t index) const;
  std::optional<std::size_t> locate(const Vec& p) const;

  std::span<const ObstacleId> cell(std::size_t index) const {
    return {ids_.data() + offsets_[index], ids_.data() + offsets_[index + 1]};
  }

 private:
  friend SpatialGrid build_grid(const PointConfiguration&, double, std::optional<double>);

  int dim_ = 2;
  double cell_size_ = 1.0;
  Vec origin_;
  std::array<int, 3> extent_{0, 0, 1};
  std::vector<std::uint32_t> offsets_;
  std::vector<ObstacleId> ids_;
};

/// Default cell side max(4 eps, sample_radius / 64).
double default_cell_size(const PointConfiguration& config, double eps);

SpatialGrid build_grid(const PointConfiguration& config, double eps,
                       std::optional<double> cell_size = std::nullopt);

struct Hit {
  double tau = 0.0;
  ObstacleId id = 0;
  /// Unit normal (x + tau v - c) / eps, pointing out of the obstacle into the table.
  Vec normal;
};

/// First positive root over all obstacles of |x + t v - c|^2 = eps^2 with
/// t <= horizon. Throws PreconditionViolation if z.x is strictly inside an obstacle.
std::optional<Hit> first_collision(const PhasePoint& z, const PointConfiguration& config,
                                   const SpatialGrid& grid, double eps, double horizon);

/// Same contract as first_collision, by an O(#C) scan. Used as the oracle for the grid path.
std::optional<Hit> first_collision_brute(const PhasePoint& z, const PointConfiguration& config,
                                         double eps, double horizon);

/// Specular reflection v - 2 (v . n) n, renormalized.
Vec reflect(const Vec& v, const Vec& normal);

struct TrajectoryResult {
  PhasePoint endpoint;
  std::vector<double> collision_times;
  std::vector<ObstacleId> obstacle_ids;
  /// Collision points and post-reflection velocities; filled only with FlowOptions::record_path.
  std::vector<PhasePoint> collision_states;
  std::size_t n_collisions = 0;
  int started_in_table = 1;
  int recollision_free = 1;
};

struct FlowOptions {
  std::size_t max_collisions = 1'000'000;
  bool record_path = false;
};

/// Billiard flow Z_eps(t, z; C) with its collision record.
///
/// If z.x lies strictly inside an obstacle the phase point is not in the
/// table: the result has started_in_table = 0, endpoint = z and no collisions.
/// Throws RunawayTrajectory past `options.max_collisions`.
TrajectoryResult flow(const PhasePoint& z, double t, const PointConfiguration& config,
                      const SpatialGrid& grid, double eps, const FlowOptions& options = {});

/// flow() driven by first_collision_brute.
TrajectoryResult flow_brute(const PhasePoint& z, double t, const PointConfiguration& config,
                            double eps, const FlowOptions& options = {});

/// Lambda_eps(1, N; z; C): 1 iff the colliding obstacle ids are pairwise distinct.
int recollision_filter(const TrajectoryResult& record);

/// Grid-accelerated occupancy_indicator.
int occupancy_indicator(const Vec& x, const PointConfiguration& config, const SpatialGrid& grid,
                        double eps);

/// One row per collision: sample_id, j, tau_j, obstacle_id, x1..xd, v1..vd.
/// Requires a record produced with FlowOptions::record_path.
void write_trajectory_csv_header(std::ostream& out, int dim);
void write_trajectory_csv(std::ostream& out, std::size_t sample_id, const TrajectoryResult& record,
                          int dim);

}  // namespace lorentz_bg
