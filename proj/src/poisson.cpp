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

#include "lorentz_bg/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "lorentz_bg/errors.hpp"
#include "lorentz_bg/parallel.hpp"

namespace lorentz_bg {
namespace {

void check_dim(int dim) {
  if (dim != 2 && dim != 3) {
    throw InvalidParameter("dimension must be 2 or 3, got " + std::to_string(dim));
  }
}

// Visits pairs (i, j), i < j, of `points` with |p_i - p_j| <= r. The visitor
// returns false to stop early. Bucketing uses cells of side r keyed by packed
// integer coordinates, so only the 3^d neighbouring cells are scanned.
template <typename Visitor>
void for_each_close_pair(const std::vector<Vec>& points, int dim, double r, Visitor&& visit) {
  const std::size_t n = points.size();
  if (n < 2) return;
  constexpr std::int64_t kBias = 1 << 20;
  constexpr std::int64_t kMask = (1 << 21) - 1;
  auto cell_of = [&](const Vec& p, int axis) {
    return static_cast<std::int64_t>(std::floor(p[axis] / r)) + kBias;
  };
  auto pack = [](std::int64_t a, std::int64_t b, std::int64_t c) {
    return static_cast<std::uint64_t>(((a & kMask) << 42) | ((b & kMask) << 21) | (c & kMask));
  };
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& p = points[i];
    keyed[i] = {pack(cell_of(p, 0), cell_of(p, 1), dim == 3 ? cell_of(p, 2) : kBias),
                static_cast<std::uint32_t>(i)};
  }
  std::sort(keyed.begin(), keyed.end());
  const double r2 = r * r;
  const int zspan = dim == 3 ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& p = points[i];
    const std::int64_t cx = cell_of(p, 0), cy = cell_of(p, 1);
    const std::int64_t cz = dim == 3 ? cell_of(p, 2) : kBias;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -zspan; dz <= zspan; ++dz) {
          const std::uint64_t key = pack(cx + dx, cy + dy, cz + dz);
          auto lo = std::lower_bound(keyed.begin(), keyed.end(), std::make_pair(key, std::uint32_t{0}));
          for (auto it = lo; it != keyed.end() && it->first == key; ++it) {
            const std::size_t j = it->second;
            if (j <= i) continue;
            if (norm2(points[j] - p) <= r2 && !visit(i, j)) return;
          }
        }
      }
    }
  }
}

std::vector<Vec> centers_in_region(const PointConfiguration& config, double region_radius) {
  std::vector<Vec> inside;
  inside.reserve(config.size());
  const double r2 = region_radius * region_radius;
  for (const Vec& c : config.centers) {
    if (norm2(c) <= r2) inside.push_back(c);
  }
  return inside;
}

}  // namespace

PointConfiguration sample_configuration(int dim, double intensity, double radius, Rng& rng,
                                        const SamplerLimits& limits) {
  check_dim(dim);
  if (!std::isfinite(intensity) || intensity < 0.0) {
    throw InvalidParameter("intensity must be finite and non-negative");
  }
  if (!std::isfinite(radius) || radius <= 0.0) {
    throw InvalidParameter("sample radius must be finite and positive");
  }
  const double mean = intensity * ball_volume(dim, radius);
  if (mean > limits.max_expected_count) {
    std::ostringstream msg;
    msg << "expected obstacle count " << mean << " exceeds cap " << limits.max_expected_count;
    throw ResourceLimit(msg.str());
  }
  PointConfiguration config;
  config.dim = dim;
  config.sample_radius = radius;
  config.intensity = intensity;
  const std::uint64_t count = rng.poisson(mean);
  config.centers.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) config.centers.push_back(uniform_in_ball(rng, dim, radius));
  return config;
}

bool min_separation_ok(const PointConfiguration& config, double eps, double region_radius) {
  bool ok = true;
  for_each_close_pair(centers_in_region(config, region_radius), config.dim, 3.0 * eps,
                      [&](std::size_t, std::size_t) {
                        ok = false;
                        return false;
                      });
  // for_each_close_pair uses <=, which is exactly the strict-separation failure.
  return ok;
}

std::size_t close_pair_count(const PointConfiguration& config, double eps, double region_radius) {
  std::size_t count = 0;
  for_each_close_pair(centers_in_region(config, region_radius), config.dim, 3.0 * eps,
                      [&](std::size_t, std::size_t) {
                        ++count;
                        return true;
                      });
  return count;
}

ProbabilityEstimate estimate_exclusion_probability(int dim, double eps, double intensity,
                                                   double region_radius, std::size_t n_samples,
                                                   const Stream& stream) {
  if (n_samples < 100) throw InvalidParameter("estimate_exclusion_probability needs n_samples >= 100");
  if (!(eps > 0.0)) throw InvalidParameter("eps must be positive");
  std::vector<unsigned char> failed(n_samples, 0);
  parallel_for(n_samples, [&](std::size_t i) {
    Rng rng(stream.split(i));
    if (intensity == 0.0) return;
    const PointConfiguration config = sample_configuration(dim, intensity, region_radius, rng);
    failed[i] = min_separation_ok(config, eps, region_radius) ? 0 : 1;
  });
  std::size_t k = 0;
  for (unsigned char f : failed) k += f;
  ProbabilityEstimate out;
  out.n = n_samples;
  out.estimate = static_cast<double>(k) / static_cast<double>(n_samples);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(n_samples));
  return out;
}

int occupancy_indicator(const Vec& x, const PointConfiguration& config, double eps) {
  const double e2 = eps * eps;
  for (const Vec& c : config.centers) {
    if (norm2(x - c) < e2) return 0;
  }
  return 1;
}

}  // namespace lorentz_bg
