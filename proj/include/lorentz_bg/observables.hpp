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

#include <functional>
#include <string>
#include <vector>

#include "lorentz_bg/stats.hpp"
#include "lorentz_bg/vec.hpp"

namespace lorentz_bg {

/// Bounded test function phi(x, v) with a recorded sup-norm bound.
struct Observable {
  std::string name;
  std::function<double(const PhasePoint&)> fn;
  double bound = 1.0;

  double operator()(const PhasePoint& z) const { return fn(z); }
};

/// C^2 compactly supported bump (1 - |x - c|^2 / r^2)^3 on |x - c| < r, zero outside. Sup is 1.
double bump(const Vec& x, const Vec& center, double radius);

Observable constant_observable(double value = 1.0);

/// Default weak-* test dictionary (8 entries): the constant, the velocity
/// coordinates, three spatial bumps and bump-velocity products.
/// d = 2: one v1 v2 bump_a bump_b bump_c bump_a_v1 bump_b_v2.
/// d = 3: one v1 v2 v3 bump_a bump_b bump_c bump_a_v1.
std::vector<Observable> default_dictionary(int dim);

/// Look up dictionary entries by name; throws InvalidParameter on unknown names.
std::vector<Observable> select_observables(int dim, const std::vector<std::string>& names);

}  // namespace lorentz_bg
