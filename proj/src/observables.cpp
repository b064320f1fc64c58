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

#include "lorentz_bg/observables.hpp"

#include <algorithm>
#include <cmath>

#include "lorentz_bg/errors.hpp"

namespace lorentz_bg {

double bump(const Vec& x, const Vec& center, double radius) {
  const double s = 1.0 - norm2(x - center) / (radius * radius);
  return s > 0.0 ? s * s * s : 0.0;
}

Observable constant_observable(double value) {
  return {"one", [value](const PhasePoint&) { return value; }, std::abs(value)};
}

std::vector<Observable> default_dictionary(int dim) {
  if (dim != 2 && dim != 3) throw InvalidParameter("dimension must be 2 or 3");
  const Vec ca{0.0, 0.0, 0.0}, cb{0.75, 0.0, 0.0}, cc{-0.5, 0.5, 0.0};
  constexpr double ra = 1.0, rb = 0.75, rc = 0.75;
  std::vector<Observable> dict;
  dict.push_back(constant_observable());
  dict.push_back({"v1", [](const PhasePoint& z) { return z.v[0]; }, 1.0});
  dict.push_back({"v2", [](const PhasePoint& z) { return z.v[1]; }, 1.0});
  if (dim == 3) dict.push_back({"v3", [](const PhasePoint& z) { return z.v[2]; }, 1.0});
  dict.push_back({"bump_a", [=](const PhasePoint& z) { return bump(z.x, ca, ra); }, 1.0});
  dict.push_back({"bump_b", [=](const PhasePoint& z) { return bump(z.x, cb, rb); }, 1.0});
  dict.push_back({"bump_c", [=](const PhasePoint& z) { return bump(z.x, cc, rc); }, 1.0});
  dict.push_back({"bump_a_v1", [=](const PhasePoint& z) { return bump(z.x, ca, ra) * z.v[0]; }, 1.0});
  if (dim == 2) dict.push_back({"bump_b_v2", [=](const PhasePoint& z) { return bump(z.x, cb, rb) * z.v[1]; }, 1.0});
  return dict;
}

std::vector<Observable> select_observables(int dim, const std::vector<std::string>& names) {
  const auto dict = default_dictionary(dim);
  if (names.empty()) return dict;
  std::vector<Observable> out;
  for (const auto& name : names) {
    auto it = std::find_if(dict.begin(), dict.end(), [&](const Observable& o) { return o.name == name; });
    if (it == dict.end()) throw InvalidParameter("unknown observable '" + name + "'");
    out.push_back(*it);
  }
  return out;
}

}  // namespace lorentz_bg
