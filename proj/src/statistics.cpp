// Copyright 2026 The epstein-lab authors.
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


#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "epstein_lab/error.hpp"
#include "epstein_lab/harness.hpp"

namespace epstein_lab::harness {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf, CdfKind kind) {
  if (samples.size() < 2) throw DomainError("ks_statistic: need at least 2 samples");
  for (double x : samples) {
    if (std::isnan(x)) throw DomainError("ks_statistic: NaN sample");
  }
  std::sort(samples.begin(), samples.end());
  const double N = static_cast<double>(samples.size());
  double d = 0;
  std::size_t i = 0;
  while (i < samples.size()) {
    const double x = samples[i];
    std::size_t j = i;
    while (j < samples.size() && samples[j] == x) ++j;
    const double F = cdf(x);
    const double F_left = kind == CdfKind::kGeneral ? cdf(std::nextafter(x, -std::numeric_limits<double>::infinity())) : F;
    d = std::max({d, std::fabs(static_cast<double>(j) / N - F), std::fabs(F_left - static_cast<double>(i) / N)});
    i = j;
  }
  return d;
}

MomentEstimate moment_estimator(const std::vector<double>& samples, int k) {
  if (samples.size() < 30) throw DomainError("moment_estimator: need at least 30 samples");
  if (k < 1) throw DomainError("moment_estimator: k must be >= 1");
  const double N = static_cast<double>(samples.size());
  std::vector<double> y(samples.size());
  std::transform(samples.begin(), samples.end(), y.begin(), [k](double x) { return std::pow(x, k); });
  double mean = 0;
  for (double v : y) mean += v;
  mean /= N;
  double correction = 0;
  for (double v : y) correction += v - mean;
  mean += correction / N;
  double ss = 0;
  for (double v : y) ss += (v - mean) * (v - mean);
  // Jackknife of the sample mean: (N-1)/N sum (theta_i - theta)^2 with
  // theta_i the leave-one-out means, which reduces to ss / (N (N-1)).
  return {mean, std::sqrt(ss / (N * (N - 1.0)))};
}

}  // namespace epstein_lab::harness
