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
#include <cmath>
#include <cstddef>

namespace lorentz_bg {

/// Point or direction in R^d for d in {2, 3}.
///
/// Storage is always three components. Two-dimensional quantities keep the
/// third component at zero, so dot products and norms need no dimension
/// argument.
struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  constexpr Vec() = default;
  constexpr Vec(double x, double y, double z = 0.0) : c{x, y, z} {}

  constexpr double& operator[](std::size_t i) { return c[i]; }
  constexpr double operator[](std::size_t i) const { return c[i]; }

  constexpr Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
  }
  constexpr Vec& operator-=(const Vec& o) {
    for (std::size_t i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
  }
  constexpr Vec& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }

  friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
  friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
  friend constexpr Vec operator-(Vec a) { return a *= -1.0; }
  friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

constexpr double dot(const Vec& a, const Vec& b) {
  return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2];
}

constexpr double norm2(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec normalized(const Vec& a) { return a * (1.0 / norm(a)); }

/// Phase-space point z = (x, v) with |v| = 1.
struct PhasePoint {
  Vec x;
  Vec v;
  friend constexpr bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Free flight z + t T z = (x + t v, v).
inline PhasePoint free_flight(const PhasePoint& z, double t) { return {z.x + t * z.v, z.v}; }

/// Volume of the unit ball in R^n for n in {0, 1, 2, 3}.
constexpr double unit_ball_volume(int n) {
  switch (n) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return 3.14159265358979323846;
    case 3: return 4.0 / 3.0 * 3.14159265358979323846;
    default: return 0.0;
  }
}

inline double ball_volume(int dim, double radius) {
  return unit_ball_volume(dim) * std::pow(radius, dim);
}

}  // namespace lorentz_bg
