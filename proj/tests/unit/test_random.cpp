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
#include <set>
#include <vector>

#include <doctest.h>

#include "lorentz_bg/random.hpp"
#include "lorentz_bg/stats.hpp"

using namespace lorentz_bg;

namespace {

double poisson_pmf(double mean, std::size_t k) {
  return std::exp(-mean + static_cast<double>(k) * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0));
}

Chi2Result poisson_fit(double mean, std::size_t n, const Stream& stream) {
  Rng rng(stream);
  const std::size_t k_max = static_cast<std::size_t>(mean + 10.0 * std::sqrt(mean) + 10.0);
  std::vector<double> observed(k_max + 1, 0.0), expected(k_max + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) observed[std::min<std::size_t>(rng.poisson(mean), k_max)] += 1.0;
  double tail = 1.0;
  for (std::size_t k = 0; k < k_max; ++k) {
    expected[k] = n * poisson_pmf(mean, k);
    tail -= poisson_pmf(mean, k);
  }
  expected[k_max] = n * std::max(tail, 0.0);
  return chi2_goodness_of_fit(observed, expected);
}

}  // namespace

TEST_CASE("streams are deterministic and children are distinct") {
  const Stream s(42);
  CHECK(s.split(3) == Stream(42).split(3));
  CHECK(s.split("a") == Stream(42).split("a"));
  CHECK_FALSE(s.split(3) == s.split(4));
  CHECK_FALSE(s.split("a") == s.split("b"));
  CHECK_FALSE(s.split(0) == s);
  std::set<std::uint64_t> keys;
  for (std::uint64_t i = 0; i < 10000; ++i) keys.insert(s.split(i).key());
  CHECK(keys.size() == 10000);

  Rng a(s.split(9)), b(s.split(9));
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("uniform variates stay in range") {
  Rng rng(Stream(1));
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    const double p = rng.uniform_pos();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(p > 0.0);
    REQUIRE(p <= 1.0);
  }
}

TEST_CASE("exponential law") {
  Rng rng(Stream(2));
  CHECK(std::isinf(rng.exponential(0.0)));
  std::vector<double> xs(20000);
  for (double& x : xs) x = rng.exponential(2.0);
  const KsResult ks = ks_test(xs, [](double x) { return 1.0 - std::exp(-2.0 * x); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("poisson counts match the pmf on both sampler branches") {
  CHECK(Rng(Stream(3)).poisson(0.0) == 0);
  for (double mean : {0.5, 4.0, 29.0, 31.416, 250.0, 5000.0}) {
    CAPTURE(mean);
    const Chi2Result r = poisson_fit(mean, 20000, Stream(4).split(static_cast<std::uint64_t>(mean * 1000)));
    CHECK(r.p_value > 0.001);
  }
}

TEST_CASE("poisson mean and variance at a large mean") {
  Rng rng(Stream(5));
  const double mean = 1234.5;
  const std::size_t n = 20000;
  std::vector<double> xs(n);
  for (double& x : xs) x = static_cast<double>(rng.poisson(mean));
  const Estimate m = mean_estimate(xs);
  CHECK(std::fabs(m.value - mean) <= 3.0 * m.std_error);
  const double sd = m.std_error * std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(sd * sd - mean) / mean < 0.05);
}

TEST_CASE("uniform directions and balls") {
  for (int dim : {2, 3}) {
    CAPTURE(dim);
    Rng rng(Stream(6).split(dim));
    std::vector<double> radial, first;
    Vec sum{0.0, 0.0, 0.0};
    for (int i = 0; i < 20000; ++i) {
      const Vec v = uniform_direction(rng, dim);
      REQUIRE(std::fabs(norm(v) - 1.0) < 1e-12);
      if (dim == 2) REQUIRE(v[2] == 0.0);
      sum += v;
      first.push_back(v[0]);
      const Vec x = uniform_in_ball(rng, dim, 2.0);
      REQUIRE(norm(x) <= 2.0);
      radial.push_back(norm(x) / 2.0);
    }
    CHECK(norm(sum) / 20000.0 < 0.02);
    // P(|x| / r <= s) = s^d for the uniform law on the ball.
    CHECK(ks_test(radial, [dim](double s) { return std::pow(s, dim); }).p_value > 0.01);
    if (dim == 3) {
      // Archimedes: the first coordinate of a uniform point on S^2 is uniform on [-1, 1].
      CHECK(ks_test(first, [](double c) { return 0.5 * (c + 1.0); }).p_value > 0.01);
    } else {
      CHECK(ks_test(first, [](double c) { return 1.0 - std::acos(c) / std::numbers::pi; }).p_value > 0.01);
    }
  }
}
