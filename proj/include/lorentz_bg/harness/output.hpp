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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace lorentz_bg::harness {

/// One cell of a result table. eps = 0 denotes the limit process.
struct ResultRow {
  double eps = 0.0;
  double t = 0.0;
  std::string observable;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

using ResultTable = std::vector<ResultRow>;

/// Header: eps,t,observable,estimate,stderr,n_samples,seed. Doubles use 17 significant digits.
void write_csv(std::ostream& out, const ResultTable& rows);
void write_csv(const std::filesystem::path& path, const ResultTable& rows);
ResultTable read_csv(std::istream& in);
ResultTable read_csv(const std::filesystem::path& path);

/// Version string written into every metadata sidecar.
std::string code_version();

/// Sidecar {"code_version", "command", "parameters"}.
void write_metadata(const std::filesystem::path& path, const std::string& command, const nlohmann::json& parameters);

/// Writes `text` to `path`, creating parent directories; IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace lorentz_bg::harness
