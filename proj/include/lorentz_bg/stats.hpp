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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace lorentz_bg {

/// Monte Carlo mean with standard error s / sqrt(n), s the unbiased sample deviation.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Mean and standard error of per-sample values, summed in index order.
Estimate mean_estimate(std::span<const double> samples);

/// Upper tail P(X >= x) of the chi-square law with `dof` degrees of freedom.
double chi2_upper_tail(double x, std::size_t dof);

struct Chi2Result {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
};

/// Pearson goodness-of-fit; bins with expected count < 5 are pooled with neighbours.
Chi2Result chi2_goodness_of_fit(std::span<const double> observed, std::span<const double> expected,
                                std::size_t fitted_params = 0);

/// Pearson test of independence on an r x c contingency table (row-major).
Chi2Result chi2_independence(std::span<const double> table, std::size_t rows, std::size_t cols);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/// Asymptotic Kolmogorov survival function with the Stephens small-n correction.
double kolmogorov_p_value(double statistic, std::size_t n);

/// One-sample Kolmogorov-Smirnov test against a continuous CDF.
template <typename Cdf>
KsResult ks_test(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return {d, kolmogorov_p_value(d, samples.size())};
}

/// sqrt(a^2 + b^2).
double combined_error(double a, double b);

/// Trend test for a sequence expected to decrease: values[k+1] - values[k] <
/// 3 sqrt(se[k]^2 + se[k+1]^2) for every k. A flat noiseless sequence fails.
bool decreasing_within(std::span<const double> values, std::span<const double> std_errors, double n_sigma = 3.0);

}  // namespace lorentz_bg
