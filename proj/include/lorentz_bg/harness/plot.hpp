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

#include <string>

#include "lorentz_bg/harness/output.hpp"

namespace lorentz_bg::harness {

struct PlotOptions {
  std::string title;
  /// "eps" or "t"; empty picks eps unless all rows share one eps.
  std::string x_axis;
  bool log_x = false;
};

/// Standalone SVG: one polyline per observable with +-1 standard error bars.
/// Pure function of its arguments.
std::string render_svg(const ResultTable& rows, const PlotOptions& options = {});

}  // namespace lorentz_bg::harness
