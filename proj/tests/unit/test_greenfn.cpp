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
#include <vector>

#include <doctest.h>

#include "lorentz_bg/boltzmann.hpp"
#include "lorentz_bg/errors.hpp"
#include "lorentz_bg/greenfn.hpp"
#include "lorentz_bg/parallel.hpp"

using namespace lorentz_bg;

namespace {

GreenParams params(double eps, std::optional<double> intensity = std::nullopt) {
  GreenParams p;
  p.dim = 2;
  p.eps = eps;
  p.R = 1.0;
  p.T = 1.0;
  p.intensity = intensity;
  return p;
}

const PhasePoint kStart{Vec{0.1, 0.0, 0.0}, Vec{0.6, 0.8, 0.0}};

}  // namespace

TEST_CASE("parameters") {
  const GreenParams p = params(0.02);
  CHECK(p.lambda() == doctest::Approx(50.0));
  CHECK(p.sample_radius() == doctest::Approx(2.04));
  CHECK(params(0.02, 3.0).lambda() == 3.0);
  GreenParams bad = p;
  bad.dim = 4;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = p;
  bad.eps = -1.0;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = params(0.02, -1.0);
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
}

TEST_CASE("requests outside the domain are rejected") {
  const GreenParams p = params(0.05);
  const Stream s(1);
  CHECK_THROWS_AS(estimate_green(1.5, kStart, p, 10, s), InvalidParameter);
  CHECK_THROWS_AS(estimate_green(-0.1, kStart, p, 10, s), InvalidParameter);
  const PhasePoint far{Vec{1.5, 0.0, 0.0}, Vec{1, 0, 0}};
  CHECK_THROWS_AS(estimate_green(1.0, far, p, 10, s), InvalidParameter);
  CHECK_NOTHROW(estimate_green(0.5, far, p, 10, s));
  const PhasePoint slow{Vec{0, 0, 0}, Vec{0.5, 0, 0}};
  CHECK_THROWS_AS(estimate_green(0.5, slow, p, 10, s), InvalidParameter);
}

TEST_CASE("zero intensity reproduces free transport exactly") {
  const GreenParams p = params(0.05, 0.0);
  const Stream s(2);
  const double t = 0.9;
  const EmpiricalMeasure m = estimate_green(t, kStart, p, 500, s);
  CHECK(m.mass() == 1.0);
  const PhasePoint free = free_flight(kStart, t);
  for (const Atom& a : m.atoms) {
    REQUIRE(a.weight == 1);
    REQUIRE(a.endpoint.x[0] == free.x[0]);
    REQUIRE(a.endpoint.x[1] == free.x[1]);
  }
  const auto dict = default_dictionary(2);
  for (const Observable& phi : dict) {
    const Estimate e = pair(m, phi);
    CHECK(e.value == doctest::Approx(phi(free)).epsilon(1e-14));
    CHECK(e.std_error < 1e-12);
  }
  CHECK(recollision_mass_gap(t, kStart, p, 500, s).value == 0.0);
  const J1J2 d = decompose_J1_J2(t, kStart, p, 500, s);
  CHECK(d.j1.value == 1.0);
  CHECK(d.j2.value == 0.0);

  // With no obstacles every term of the integral equation for phi = 1 has mass 1.
  const IntegralEquationCheck ie = verify_integral_equation(t, kStart, p, constant_observable(), 50, 4, s);
  CHECK(ie.lhs == 1.0);
  CHECK(std::fabs(ie.residual) < 1e-12);
}

TEST_CASE("zero time") {
  const GreenParams p = params(0.05, 4.0);
  const Stream s(3);
  const EmpiricalMeasure m = estimate_green(0.0, kStart, p, 400, s);
  for (const Atom& a : m.atoms) REQUIRE(a.endpoint.x[0] == kStart.x[0]);
  CHECK(decompose_J1_J2(0.0, kStart, p, 400, s).j2.value == 0.0);
  const Observable bump = default_dictionary(2)[3];
  const IntegralEquationCheck ie = verify_integral_equation(0.0, kStart, p, bump, 20, 20, s);
  CHECK(ie.rhs == doctest::Approx(bump(kStart)));
  CHECK(ie.lhs == doctest::Approx(bump(kStart) * estimate_green(0.0, kStart, p, 400, s.split("lhs")).mass()));
}

TEST_CASE("decomposition and gap on shared samples") {
  // Low intensity so that separation holds often and the filtered measure is non-trivial.
  const GreenParams p = params(0.05, 1.0);
  const Stream s(4);
  const double t = 1.0;
  const auto samples = sample_green(t, kStart, p, 4000, s);
  std::size_t filtered = 0, collided = 0;
  for (const GreenSample& g : samples) {
    REQUIRE(g.weight_unfiltered() >= g.weight());
    filtered += g.weight() == 1.0;
    collided += g.weight() == 1.0 && g.n_collisions > 0;
  }
  CHECK(filtered > 1000);
  CHECK(collided > 50);

  const EmpiricalMeasure m = estimate_green(t, kStart, p, 4000, s);
  CHECK(m.mass() <= 1.0);
  CHECK(m.mass() == static_cast<double>(filtered) / 4000.0);
  const J1J2 d = decompose_J1_J2(t, kStart, p, 4000, s);
  CHECK(d.j1.value + d.j2.value == doctest::Approx(d.total).epsilon(1e-15));
  CHECK(d.total == m.mass());
  CHECK(recollision_mass_gap(t, kStart, p, 4000, s).value >= 0.0);
  CHECK(m.meta.eps == 0.05);
  CHECK(m.meta.seed == s.key());
}

TEST_CASE("thread count does not change the measure") {
  const GreenParams p = params(0.05, 1.0);
  set_thread_count(1);
  const EmpiricalMeasure a = estimate_green(1.0, kStart, p, 600, Stream(5));
  set_thread_count(4);
  const EmpiricalMeasure b = estimate_green(1.0, kStart, p, 600, Stream(5));
  set_thread_count(1);
  REQUIRE(a.atoms.size() == b.atoms.size());
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    REQUIRE(a.atoms[i].weight == b.atoms[i].weight);
    REQUIRE(a.atoms[i].endpoint.x[0] == b.atoms[i].endpoint.x[0]);
    REQUIRE(a.atoms[i].endpoint.v[1] == b.atoms[i].endpoint.v[1]);
  }
}

TEST_CASE("scattering map") {
  const PhasePoint z{Vec{0, 0, 0}, Vec{1, 0, 0}};
  const PhasePoint s = scattering_map(z, 0.5, Vec{0, 0, 0});
  CHECK(s.x[0] == 0.5);
  CHECK(s.v[0] == doctest::Approx(-1.0));
}
