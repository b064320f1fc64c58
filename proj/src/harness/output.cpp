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

#include "lorentz_bg/harness/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "lorentz_bg/errors.hpp"

namespace lorentz_bg::harness {
namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const ResultTable& rows) {
  out << "eps,t,observable,estimate,stderr,n_samples,seed\n";
  for (const ResultRow& r : rows) {
    out << format_double(r.eps) << ',' << format_double(r.t) << ',' << r.observable << ','
        << format_double(r.estimate) << ',' << format_double(r.std_error) << ',' << r.n << ',' << r.seed << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const ResultTable& rows) {
  std::ofstream out = open_for_write(path);
  write_csv(out, rows);
  if (!out) throw IoError("write failed: " + path.string());
}

ResultTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("eps,t,observable,estimate,stderr,n_samples,seed", 0) != 0) {
    throw IoError("not a result CSV (bad header)");
  }
  ResultTable rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 7) throw IoError("line " + std::to_string(line_no) + ": expected 7 fields");
    try {
      rows.push_back({std::stod(cells[0]), std::stod(cells[1]), cells[2], std::stod(cells[3]), std::stod(cells[4]),
                      static_cast<std::size_t>(std::stoull(cells[5])), std::stoull(cells[6])});
    } catch (const std::logic_error&) {
      throw IoError("line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return rows;
}

ResultTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in);
}

std::string code_version() { return "lorentz-bg 0.1.0"; }

void write_metadata(const std::filesystem::path& path, const std::string& command,
                    const nlohmann::json& parameters) {
  const nlohmann::json meta = {{"code_version", code_version()}, {"command", command}, {"parameters", parameters}};
  write_text(path, meta.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_for_write(path);
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace lorentz_bg::harness
