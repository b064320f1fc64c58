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

#include "lorentz_bg/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include "lorentz_bg/errors.hpp"

namespace lorentz_bg {

Estimate mean_estimate(std::span<const double> samples) {
  Estimate e;
  e.n = samples.size();
  if (e.n == 0) return e;
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double n = static_cast<double>(e.n);
  e.value = sum / n;
  if (e.n > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - e.value) * (x - e.value);
    e.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

double chi2_upper_tail(double x, std::size_t dof) {
  if (dof == 0) return x > 0.0 ? 0.0 : 1.0;
  if (!(x > 0.0)) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, x));
}

Chi2Result chi2_goodness_of_fit(std::span<const double> observed, std::span<const double> expected,
                                std::size_t fitted_params) {
  if (observed.size() != expected.size()) throw InvalidParameter("chi2: size mismatch");
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= 5.0) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp.empty()) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      exp.back() += e_acc;
    }
  }
  Chi2Result r;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp[i] > 0.0) r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  }
  const std::size_t used = 1 + fitted_params;
  r.dof = obs.size() > used ? obs.size() - used : 0;
  r.p_value = chi2_upper_tail(r.statistic, r.dof);
  return r;
}

Chi2Result chi2_independence(std::span<const double> table, std::size_t rows, std::size_t cols) {
  if (table.size() != rows * cols) throw InvalidParameter("chi2_independence: table shape mismatch");
  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      row_sum[i] += table[i * cols + j];
      col_sum[j] += table[i * cols + j];
      total += table[i * cols + j];
    }
  }
  Chi2Result r;
  std::size_t live_rows = 0, live_cols = 0;
  for (double s : row_sum) live_rows += s > 0.0;
  for (double s : col_sum) live_cols += s > 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double e = row_sum[i] * col_sum[j] / total;
      if (e > 0.0) r.statistic += (table[i * cols + j] - e) * (table[i * cols + j] - e) / e;
    }
  }
  r.dof = (live_rows > 1 && live_cols > 1) ? (live_rows - 1) * (live_cols - 1) : 0;
  r.p_value = chi2_upper_tail(r.statistic, r.dof);
  return r;
}

double kolmogorov_p_value(double statistic, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double combined_error(double a, double b) { return std::sqrt(a * a + b * b); }

bool decreasing_within(std::span<const double> values, std::span<const double> std_errors, double n_sigma) {
  for (std::size_t k = 0; k + 1 < values.size(); ++k) {
    if (!(values[k + 1] - values[k] < n_sigma * combined_error(std_errors[k], std_errors[k + 1]))) return false;
  }
  return true;
}

}  // namespace lorentz_bg
