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

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "lorentz_bg/billiard.hpp"
#include "lorentz_bg/errors.hpp"
#include "lorentz_bg/poisson.hpp"

using namespace lorentz_bg;

namespace {

PointConfiguration fixture(std::vector<Vec> centers, double radius) { return {2, std::move(centers), radius, 1.0}; }

PhasePoint ray(double x, double y, double vx, double vy) { return {Vec{x, y, 0.0}, Vec{vx, vy, 0.0}}; }

double box_distance(const Vec& p, const Vec& lo, double h, int dim) {
  double d2 = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double q = std::clamp(p[a], lo[a], lo[a] + h);
    d2 += (p[a] - q) * (p[a] - q);
  }
  return std::sqrt(d2);
}

// Greedy thinning until no two centers are within 3 eps of each other.
PointConfiguration thin(PointConfiguration c, double eps) {
  std::vector<Vec> kept;
  for (const Vec& x : c.centers) {
    bool ok = true;
    for (const Vec& y : kept) ok = ok && norm(x - y) > 3.0 * eps;
    if (ok) kept.push_back(x);
  }
  c.centers = kept;
  return c;
}

// Random start outside every obstacle, |x| <= 1, with a paired configuration.
struct Case {
  PhasePoint z;
  PointConfiguration config;
};

Case random_case(const Stream& s, double eps, double lambda, double t, int dim = 2) {
  Rng rng(s);
  for (;;) {
    PhasePoint z{uniform_in_ball(rng, dim, 1.0), uniform_direction(rng, dim)};
    PointConfiguration c = sample_configuration(dim, lambda, 1.0 + t + 2.0 * eps, rng);
    if (occupancy_indicator(z.x, c, eps) == 1) return {z, std::move(c)};
  }
}

}  // namespace

TEST_CASE("first collision: worked examples") {
  const double eps = 0.5;
  const PointConfiguration head_on = fixture({Vec{2.0, 0.0, 0.0}}, 3.0);
  const auto hit = first_collision_brute(ray(0, 0, 1, 0), head_on, eps, 10.0);
  REQUIRE(hit);
  CHECK(hit->tau == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(hit->id == 0);
  CHECK(hit->normal[0] == doctest::Approx(-1.0));
  CHECK(hit->normal[1] == doctest::Approx(0.0));

  const PointConfiguration offset = fixture({Vec{2.0, 0.3, 0.0}}, 3.0);
  // Smaller root of t^2 - 2 t (v . (c - x)) + |c - x|^2 - eps^2 = 0.
  const double b = 2.0, cc = 4.0 + 0.09 - 0.25;
  const double oracle = b - std::sqrt(b * b - cc);
  CHECK(oracle == doctest::Approx(1.6));
  const SpatialGrid grid = build_grid(offset, eps);
  const auto h2 = first_collision(ray(0, 0, 1, 0), offset, grid, eps, 10.0);
  REQUIRE(h2);
  CHECK(h2->tau == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(norm(h2->normal) == doctest::Approx(1.0));

  const PointConfiguration empty = fixture({}, 3.0);
  CHECK_FALSE(first_collision(ray(0, 0, 1, 0), empty, build_grid(empty, eps), eps, 10.0));
  CHECK_FALSE(first_collision_brute(ray(0, 0, 1, 0), head_on, eps, 1.4));
}

TEST_CASE("tangent rays and starts on a sphere") {
  const double eps = 0.5;
  // Ray y = 0 tangent to the sphere around (2, 0.5): discriminant 0.
  const PointConfiguration tangent = fixture({Vec{2.0, 0.5, 0.0}}, 3.0);
  CHECK_FALSE(first_collision_brute(ray(0, 0, 1, 0), tangent, eps, 10.0));

  const PointConfiguration touching = fixture({Vec{0.5, 0.0, 0.0}}, 3.0);
  CHECK_FALSE(first_collision_brute(ray(0, 0, -1, 0), touching, eps, 10.0));
  const auto inward = first_collision_brute(ray(0, 0, 1, 0), touching, eps, 10.0);
  REQUIRE(inward);
  CHECK(inward->tau == 0.0);
  const TrajectoryResult bounce = flow_brute(ray(0, 0, 1, 0), 1.0, touching, eps);
  CHECK(bounce.n_collisions == 1);
  CHECK(bounce.endpoint.x[0] == doctest::Approx(-1.0));
  CHECK(occupancy_indicator(Vec{0, 0, 0}, touching, eps) == 1);

  const PointConfiguration covering = fixture({Vec{0.1, 0.0, 0.0}}, 3.0);
  CHECK_THROWS_AS(first_collision_brute(ray(0, 0, 1, 0), covering, eps, 1.0), PreconditionViolation);
  CHECK_THROWS_AS(first_collision(ray(0, 0, 1, 0), covering, build_grid(covering, eps), eps, 1.0),
                  PreconditionViolation);
  const TrajectoryResult out = flow(ray(0, 0, 1, 0), 1.0, covering, build_grid(covering, eps), eps);
  CHECK(out.started_in_table == 0);
  CHECK(out.n_collisions == 0);
}

TEST_CASE("reflection") {
  const Vec r1 = reflect(Vec{1, 0, 0}, Vec{-1, 0, 0});
  CHECK(r1[0] == doctest::Approx(-1.0));
  const Vec r2 = reflect(Vec{1, 0, 0}, Vec{0, 1, 0});
  CHECK(r2[0] == doctest::Approx(1.0));
  CHECK(r2[1] == doctest::Approx(0.0));
  const double s = std::sqrt(2.0) / 2.0;
  const Vec r3 = reflect(Vec{1, 0, 0}, Vec{-s, s, 0});
  CHECK(r3[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(r3[1] == doctest::Approx(1.0));

  Rng rng(Stream(1));
  for (int i = 0; i < 10000; ++i) {
    const int dim = 2 + (i % 2);
    const Vec v = uniform_direction(rng, dim), n = uniform_direction(rng, dim);
    // Householder matrix I - 2 n n^T applied entrywise.
    Vec h{0, 0, 0};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) h[a] += ((a == b ? 1.0 : 0.0) - 2.0 * n[a] * n[b]) * v[b];
    }
    const Vec r = reflect(v, n);
    REQUIRE(norm(r - h) < 1e-12);
    REQUIRE(std::fabs(norm(r) - 1.0) < 1e-14);
    REQUIRE(norm(reflect(r, n) - v) < 1e-12);
  }
}

TEST_CASE("flow: worked examples") {
  const double eps = 0.5;
  const PointConfiguration empty = fixture({}, 5.0);
  const TrajectoryResult free = flow(ray(0.1, 0.2, 0.6, 0.8), 2.0, empty, build_grid(empty, eps), eps);
  CHECK(free.n_collisions == 0);
  CHECK(free.endpoint.x[0] == doctest::Approx(1.3));
  CHECK(free.endpoint.x[1] == doctest::Approx(1.8));
  CHECK(free.recollision_free == 1);

  const PointConfiguration one = fixture({Vec{2.0, 0.0, 0.0}}, 5.0);
  const TrajectoryResult r = flow(ray(0, 0, 1, 0), 3.0, one, build_grid(one, eps), eps);
  REQUIRE(r.n_collisions == 1);
  CHECK(r.collision_times[0] == doctest::Approx(1.5));
  // Reflected at x = 1.5 after time 1.5, then 1.5 more units back toward the origin.
  CHECK(r.endpoint.x[0] == doctest::Approx(0.0));
  CHECK(r.endpoint.x[1] == doctest::Approx(0.0));
  CHECK(r.endpoint.v[0] == doctest::Approx(-1.0));

  // Two facing obstacles trap the particle; the collision cap turns it into an error.
  const PointConfiguration trap = fixture({Vec{-1.0, 0, 0}, Vec{1.0, 0, 0}}, 5.0);
  FlowOptions capped;
  capped.max_collisions = 3;
  CHECK_THROWS_AS(flow(ray(0, 0, 1, 0), 10.0, trap, build_grid(trap, eps), eps, capped), RunawayTrajectory);
  const TrajectoryResult bounces = flow(ray(0, 0, 1, 0), 2.75, trap, build_grid(trap, eps), eps);
  CHECK(bounces.n_collisions == 3);
  CHECK(bounces.recollision_free == 0);
  CHECK_THROWS_AS(flow(ray(0, 0, 1, 0), -1.0, trap, build_grid(trap, eps), eps), InvalidParameter);
}

TEST_CASE("recollision filter") {
  TrajectoryResult r;
  CHECK(recollision_filter(r) == 1);
  r.obstacle_ids = {3, 7, 2};
  CHECK(recollision_filter(r) == 1);
  r.obstacle_ids = {3, 7, 3};
  CHECK(recollision_filter(r) == 0);
}

TEST_CASE("grid construction") {
  const PointConfiguration empty = fixture({}, 2.0);
  CHECK(build_grid(empty, 0.1).occupied_cell_count() == 0);
  CHECK_THROWS_AS(build_grid(empty, 0.0), InvalidParameter);

  for (int dim : {2, 3}) {
    CAPTURE(dim);
    const double eps = 0.5;
    const PointConfiguration single{dim, {Vec{0, 0, 0}}, 2.0, 1.0};
    const SpatialGrid grid = build_grid(single, eps, 1.0);
    CHECK(grid.cell_size() == 1.0);
    std::size_t expected = 0;
    for (std::size_t i = 0; i < grid.cell_count(); ++i) {
      const auto cc = grid.cell_coords(i);
      Vec lo = grid.origin();
      for (int a = 0; a < dim; ++a) lo[a] += cc[a] * grid.cell_size();
      const bool hit = box_distance(Vec{0, 0, 0}, lo, 1.0, dim) < eps;
      expected += hit;
      REQUIRE((grid.cell(i).size() == 1) == hit);
    }
    CHECK(grid.occupied_cell_count() == expected);
  }
}

TEST_CASE("grid and brute-force agree on random rays and flows") {
  const Stream s(2);
  const double eps = 0.05, t = 2.0;
  std::size_t total_collisions = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const int dim = i % 4 == 3 ? 3 : 2;
    const double lambda = boltzmann_grad_intensity(dim, dim == 2 ? eps : 0.2);
    const double e = dim == 2 ? eps : 0.2;
    Case c = random_case(s.split(i), e, lambda, t, dim);
    const SpatialGrid grid = build_grid(c.config, e);
    const auto a = first_collision(c.z, c.config, grid, e, t);
    const auto b = first_collision_brute(c.z, c.config, e, t);
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
      REQUIRE(a->id == b->id);
      REQUIRE(std::fabs(a->tau - b->tau) < 1e-12);
    }
    const TrajectoryResult fg = flow(c.z, t, c.config, grid, e);
    const TrajectoryResult fb = flow_brute(c.z, t, c.config, e);
    REQUIRE(norm(fg.endpoint.x - fb.endpoint.x) < 1e-9);
    REQUIRE(norm(fg.endpoint.v - fb.endpoint.v) < 1e-9);
    REQUIRE(fg.obstacle_ids == fb.obstacle_ids);
    total_collisions += fg.n_collisions;
  }
  CHECK(total_collisions > 1000);
}

TEST_CASE("flow invariants on random configurations") {
  const Stream s(3);
  const double eps = 0.05, t = 2.0;
  for (std::size_t i = 0; i < 300; ++i) {
    Case c = random_case(s.split(i), eps, 20.0, t);
    const SpatialGrid grid = build_grid(c.config, eps);
    FlowOptions opts;
    opts.record_path = true;
    const TrajectoryResult r = flow(c.z, t, c.config, grid, eps, opts);
    REQUIRE(std::fabs(norm(r.endpoint.v) - 1.0) <= 1e-12);
    REQUIRE(norm(r.endpoint.x) <= norm(c.z.x) + t + 1e-9);
    REQUIRE(occupancy_indicator(r.endpoint.x, c.config, eps * (1.0 - 1e-9)) == 1);
    std::set<ObstacleId> ids(r.obstacle_ids.begin(), r.obstacle_ids.end());
    REQUIRE(r.recollision_free == (ids.size() == r.obstacle_ids.size() ? 1 : 0));
    // Unit speed: segment lengths add up to the elapsed time.
    Vec prev = c.z.x;
    double prev_t = 0.0;
    for (std::size_t j = 0; j < r.n_collisions; ++j) {
      REQUIRE(r.collision_times[j] > prev_t - (j == 0 ? 1e-300 : 0.0));
      REQUIRE(r.collision_times[j] <= t);
      REQUIRE(std::fabs(norm(r.collision_states[j].x - prev) - (r.collision_times[j] - prev_t)) < 1e-9);
      REQUIRE(std::fabs(norm(c.config.centers[r.obstacle_ids[j]] - r.collision_states[j].x) - eps) < 1e-9);
      prev = r.collision_states[j].x;
      prev_t = r.collision_times[j];
    }
    REQUIRE(std::fabs(norm(r.endpoint.x - prev) - (t - prev_t)) < 1e-9);

    const TrajectoryResult again = flow(c.z, t, c.config, grid, eps, opts);
    REQUIRE(again.collision_times == r.collision_times);
    REQUIRE(again.endpoint.x[0] == r.endpoint.x[0]);
  }
}

TEST_CASE("separated configurations have collision gaps above eps") {
  const Stream s(4);
  const double eps = 0.05, t = 2.0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    Case c = random_case(s.split(i), eps, 20.0, t);
    c.config = thin(c.config, eps);
    REQUIRE(min_separation_ok(c.config, eps, c.config.sample_radius));
    if (occupancy_indicator(c.z.x, c.config, eps) == 0) continue;
    const TrajectoryResult r = flow(c.z, t, c.config, build_grid(c.config, eps), eps);
    for (std::size_t j = 1; j < r.n_collisions; ++j) {
      REQUIRE(r.collision_times[j] - r.collision_times[j - 1] > eps);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("trajectory CSV") {
  const double eps = 0.5;
  const PointConfiguration one = fixture({Vec{2.0, 0.0, 0.0}}, 5.0);
  FlowOptions opts;
  opts.record_path = true;
  const TrajectoryResult r = flow(ray(0, 0, 1, 0), 3.0, one, build_grid(one, eps), eps, opts);
  std::ostringstream out;
  write_trajectory_csv_header(out, 2);
  write_trajectory_csv(out, 7, r, 2);
  CHECK(out.str() == "sample_id,j,tau_j,obstacle_id,x1,x2,v1,v2\n7,1,1.5,0,1.5,0,-1,0\n");

  const PointConfiguration empty = fixture({}, 5.0);
  std::ostringstream none;
  write_trajectory_csv(none, 0, flow(ray(0, 0, 1, 0), 3.0, empty, build_grid(empty, eps), eps, opts), 2);
  CHECK(none.str().empty());
}
