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
#include <numbers>
#include <vector>

#include <doctest.h>

#include "lorentz_bg/billiard.hpp"
#include "lorentz_bg/errors.hpp"
#include "lorentz_bg/parallel.hpp"
#include "lorentz_bg/poisson.hpp"
#include "lorentz_bg/stats.hpp"

using namespace lorentz_bg;
using std::numbers::pi;

namespace {

PointConfiguration fixture(std::vector<Vec> centers, double radius) { return {2, std::move(centers), radius, 1.0}; }

// \int_{B} \int_{B} 1{|x - y| <= r} dx dy for the disk of radius rho, by Simpson's rule over the
// lens area A(s) of two disks at distance s.
double close_pair_volume(double rho, double r) {
  auto lens = [rho](double s) { return 2.0 * rho * rho * std::acos(s / (2.0 * rho)) - 0.5 * s * std::sqrt(4.0 * rho * rho - s * s); };
  const int m = 2000;
  const double h = r / m;
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double s = k * h;
    const double w = (k == 0 || k == m) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    sum += w * 2.0 * pi * s * lens(s);
  }
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("zero intensity gives the empty configuration") {
  Rng rng(Stream(1));
  const PointConfiguration c = sample_configuration(2, 0.0, 3.0, rng);
  CHECK(c.empty());
  CHECK(c.sample_radius == 3.0);
  CHECK(min_separation_ok(c, 0.1, 3.0));
  CHECK(occupancy_indicator(Vec{0.0, 0.0, 0.0}, c, 0.1) == 1);
}

TEST_CASE("sampler rejects invalid parameters") {
  Rng rng(Stream(2));
  CHECK_THROWS_AS(sample_configuration(4, 1.0, 1.0, rng), InvalidParameter);
  CHECK_THROWS_AS(sample_configuration(2, -1.0, 1.0, rng), InvalidParameter);
  CHECK_THROWS_AS(sample_configuration(2, NAN, 1.0, rng), InvalidParameter);
  CHECK_THROWS_AS(sample_configuration(2, INFINITY, 1.0, rng), InvalidParameter);
  CHECK_THROWS_AS(sample_configuration(2, 1.0, 0.0, rng), InvalidParameter);
  CHECK_THROWS_AS(sample_configuration(2, 1.0, NAN, rng), InvalidParameter);
  SamplerLimits tight;
  tight.max_expected_count = 100.0;
  CHECK_THROWS_AS(sample_configuration(2, 1000.0, 1.0, rng, tight), ResourceLimit);
}

TEST_CASE("count mean and variance equal lambda |B|") {
  const Stream s(3);
  const std::size_t n = 10000;
  std::vector<double> counts(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(s.split(i));
    const PointConfiguration c = sample_configuration(2, 10.0, 1.0, rng);
    for (const Vec& x : c.centers) REQUIRE(norm(x) <= 1.0);
    counts[i] = static_cast<double>(c.size());
  }
  const double mu = 10.0 * pi;
  const Estimate m = mean_estimate(counts);
  CHECK(std::fabs(m.value - mu) <= 3.0 * m.std_error);
  const double var = m.std_error * m.std_error * static_cast<double>(n);
  // Var of the sample variance for Poisson(mu): (mu + 2 mu^2) / n.
  CHECK(std::fabs(var - mu) <= 3.0 * std::sqrt((mu + 2.0 * mu * mu) / static_cast<double>(n)));
}

TEST_CASE("box counts are Poisson and half-ball counts are independent") {
  const Stream s(4);
  const std::size_t n = 10000;
  const double lambda = 10.0;
  // Box [-0.5, 0.5] x [0, 0.5] inside the unit disk: mean 5.
  const double mean_box = lambda * 0.5;
  std::vector<double> box_hist(31, 0.0), table(16, 0.0);
  auto group = [](std::size_t k) { return k <= 12 ? 0 : k <= 15 ? 1 : k <= 18 ? 2 : 3; };
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng(s.split(i));
    const PointConfiguration c = sample_configuration(2, lambda, 1.0, rng);
    std::size_t in_box = 0, left = 0, right = 0;
    for (const Vec& x : c.centers) {
      if (std::fabs(x[0]) <= 0.5 && x[1] >= 0.0 && x[1] <= 0.5) ++in_box;
      (x[0] < 0.0 ? left : right) += 1;
    }
    box_hist[std::min<std::size_t>(in_box, 30)] += 1.0;
    table[group(left) * 4 + group(right)] += 1.0;
  }
  std::vector<double> expected(31, 0.0);
  double tail = 1.0;
  for (std::size_t k = 0; k < 30; ++k) {
    const double p = std::exp(-mean_box + k * std::log(mean_box) - std::lgamma(k + 1.0));
    expected[k] = n * p;
    tail -= p;
  }
  expected[30] = n * tail;
  CHECK(chi2_goodness_of_fit(box_hist, expected).p_value > 0.01);
  CHECK(chi2_independence(table, 4, 4).p_value > 0.01);
}

TEST_CASE("centers are uniform in the ball") {
  Rng rng(Stream(5));
  const PointConfiguration c = sample_configuration(2, 2000.0, 2.0, rng);
  std::vector<double> r2, angle;
  for (const Vec& x : c.centers) {
    r2.push_back(norm2(x) / 4.0);
    angle.push_back(std::atan2(x[1], x[0]));
  }
  CHECK(ks_test(r2, [](double u) { return u; }).p_value > 0.01);
  CHECK(ks_test(angle, [](double a) { return (a + pi) / (2.0 * pi); }).p_value > 0.01);

  Rng rng3(Stream(6));
  const PointConfiguration c3 = sample_configuration(3, 500.0, 1.0, rng3);
  std::vector<double> r3;
  for (const Vec& x : c3.centers) r3.push_back(std::pow(norm(x), 3));
  CHECK(ks_test(r3, [](double u) { return u; }).p_value > 0.01);
}

TEST_CASE("separation filter edge cases") {
  const double eps = 0.25;
  CHECK(min_separation_ok(fixture({}, 2.0), eps, 1.0));
  CHECK_FALSE(min_separation_ok(fixture({Vec{0, 0, 0}, Vec{0.75, 0, 0}}, 2.0), eps, 1.0));
  CHECK(min_separation_ok(fixture({Vec{0, 0, 0}, Vec{0.7500001, 0, 0}}, 2.0), eps, 1.0));
  // Pair at distance 3 eps straddling the region boundary |x| = 1.
  CHECK(min_separation_ok(fixture({Vec{0.5, 0, 0}, Vec{1.25, 0, 0}}, 2.0), eps, 1.0));
  CHECK_FALSE(min_separation_ok(fixture({Vec{0.5, 0, 0}, Vec{1.25, 0, 0}}, 2.0), eps, 1.25));
  CHECK(close_pair_count(fixture({Vec{0, 0, 0}, Vec{0.75, 0, 0}, Vec{0, 0.5, 0}}, 2.0), eps, 1.0) == 2);
}

TEST_CASE("removing a center never breaks separation") {
  const Stream s(7);
  for (std::size_t trial = 0; trial < 200; ++trial) {
    Rng rng(s.split(trial));
    PointConfiguration c = sample_configuration(2, 6.0, 1.0, rng);
    const double eps = 0.03;
    bool ok = min_separation_ok(c, eps, 1.0);
    while (!c.empty()) {
      c.centers.erase(c.centers.begin() + static_cast<std::ptrdiff_t>(rng.uniform() * c.size()));
      const bool now = min_separation_ok(c, eps, 1.0);
      REQUIRE((!ok || now));
      ok = now;
    }
  }
}

TEST_CASE("mean number of close pairs matches the pair integral") {
  const double lambda = 50.0, eps = 0.02, rho = 1.0;
  const double expected = 0.5 * lambda * lambda * close_pair_volume(rho, 3.0 * eps);
  const Stream s(8);
  std::vector<double> counts(4000);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    Rng rng(s.split(i));
    counts[i] = static_cast<double>(close_pair_count(sample_configuration(2, lambda, rho, rng), eps, rho));
  }
  const Estimate m = mean_estimate(counts);
  CAPTURE(expected);
  CHECK(std::fabs(m.value - expected) <= 3.0 * m.std_error);
}

TEST_CASE("occupancy indicator") {
  const double eps = 0.5;
  const PointConfiguration c = fixture({Vec{0.5, 0, 0}}, 2.0);
  CHECK(occupancy_indicator(Vec{0, 0, 0}, c, eps) == 1);
  CHECK(occupancy_indicator(Vec{0.25, 0, 0}, c, eps) == 0);
  CHECK(occupancy_indicator(Vec{-0.1, 0, 0}, c, eps) == 1);
}

TEST_CASE("vacancy probability at a fixed point") {
  const double eps = 0.05;
  const double lambda = boltzmann_grad_intensity(2, eps);
  CHECK(lambda == doctest::Approx(20.0));
  CHECK(boltzmann_grad_intensity(3, 0.1) == doctest::Approx(100.0));
  const Stream s(9);
  std::vector<double> covered(20000);
  for (std::size_t i = 0; i < covered.size(); ++i) {
    Rng rng(s.split(i));
    covered[i] = 1.0 - occupancy_indicator(Vec{0.3, -0.2, 0}, sample_configuration(2, lambda, 1.0, rng), eps);
  }
  const Estimate m = mean_estimate(covered);
  const double exact = 1.0 - std::exp(-pi * eps);
  CHECK(exact == doctest::Approx(0.145).epsilon(0.01));
  CHECK(std::fabs(m.value - exact) <= 3.0 * m.std_error);
  CHECK(exact < pi * eps);
}

TEST_CASE("grid occupancy equals brute force on a probe grid") {
  Rng rng(Stream(10));
  const double eps = 0.05;
  const PointConfiguration c = sample_configuration(2, 20.0, 2.0, rng);
  const SpatialGrid grid = build_grid(c, eps);
  for (int i = 0; i < 32; ++i) {
    for (int j = 0; j < 32; ++j) {
      const Vec x{-1.4 + 2.8 * i / 31.0, -1.4 + 2.8 * j / 31.0, 0.0};
      REQUIRE(occupancy_indicator(x, c, grid, eps) == occupancy_indicator(x, c, eps));
    }
  }
}

TEST_CASE("exclusion probability") {
  const Stream s(11);
  CHECK(estimate_exclusion_probability(2, 0.01, 0.0, 4.0, 200, s).estimate == 0.0);
  CHECK_THROWS_AS(estimate_exclusion_probability(2, 0.01, 1.0, 4.0, 99, s), InvalidParameter);

  set_thread_count(1);
  const ProbabilityEstimate a = estimate_exclusion_probability(2, 0.05, 20.0, 1.0, 2000, s);
  set_thread_count(3);
  const ProbabilityEstimate b = estimate_exclusion_probability(2, 0.05, 20.0, 1.0, 2000, s);
  set_thread_count(1);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);

  // Frozen regression value under the scaling lambda = 1 / eps on B(0, 4): about 710 close
  // pairs are expected, so every configuration fails.
  const ProbabilityEstimate frozen = estimate_exclusion_probability(2, 0.01, 100.0, 4.0, 1000, s.split(1));
  CHECK(frozen.estimate == 1.0);
  CHECK(frozen.std_error == 0.0);
}
