// Copyright 2026 The matconc authors
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

// Private helpers shared by the module translation units. Not installed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "matconc/chaos.hpp"
#include "matconc/errors.hpp"

namespace matconc::internal {

// Mixed-radix lexicographic enumeration of {0..radix-1}^len with digit 0 most
// significant. The fixed order makes cross-oracle comparisons reproducible.
template <class F>
void for_each_config(int len, int radix, F&& fn) {
  std::vector<int> c(static_cast<size_t>(len), 0);
  while (true) {
    fn(c);
    int pos = len - 1;
    while (pos >= 0 && c[static_cast<size_t>(pos)] == radix - 1) {
      c[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++c[static_cast<size_t>(pos)];
  }
}

inline double ipow_count(int radix, int len) {
  double v = 1.0;
  for (int i = 0; i < len; ++i) v *= radix;
  return v;
}

// (mean)^(1/(2q)) with the zero edge handled.
inline double root_2q(double mean_pow, double q) {
  if (mean_pow <= 0.0) return 0.0;
  return std::pow(mean_pow, 1.0 / (2.0 * q));
}

// Monte Carlo estimate of (E ||X||^{2q})^{1/(2q)} from norm samples, with a
// leave-one-out jackknife standard error for the transformed statistic.
inline MomentEstimate moment_from_norm_samples(const std::vector<double>& norms, double q) {
  MomentEstimate est;
  est.q = q;
  est.method = MomentEstimate::Method::MonteCarlo;
  est.replicas = static_cast<long long>(norms.size());
  const size_t r = norms.size();
  if (r == 0) return est;
  std::vector<double> pows(r);
  double sum = 0.0;
  for (size_t i = 0; i < r; ++i) {
    pows[i] = std::pow(norms[i], 2.0 * q);
    sum += pows[i];
  }
  est.value = root_2q(sum / static_cast<double>(r), q);
  if (r < 2) return est;
  double loo_mean = 0.0;
  std::vector<double> loo(r);
  for (size_t i = 0; i < r; ++i) {
    loo[i] = root_2q((sum - pows[i]) / static_cast<double>(r - 1), q);
    loo_mean += loo[i];
  }
  loo_mean /= static_cast<double>(r);
  double ss = 0.0;
  for (size_t i = 0; i < r; ++i) ss += (loo[i] - loo_mean) * (loo[i] - loo_mean);
  est.stderr_ = std::sqrt(ss * static_cast<double>(r - 1) / static_cast<double>(r));
  return est;
}

// E[(max_k V_k)^q] for independent discrete variables V_k >= 0, each given as
// a (value, prob) list. Exact via the product CDF, so no product-space
// enumeration is needed.
inline double expected_max_pow(std::vector<std::vector<std::pair<double, double>>> vars,
                               double q) {
  if (vars.empty()) return 0.0;
  std::vector<double> values;
  for (auto& v : vars) {
    std::sort(v.begin(), v.end());
    for (const auto& [val, p] : v) values.push_back(val);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  auto cdf = [](const std::vector<std::pair<double, double>>& v, double x) {
    double s = 0.0;
    for (const auto& [val, p] : v) {
      if (val <= x) s += p;
    }
    return s;
  };

  double out = 0.0;
  double prev_f = 0.0;
  for (double u : values) {
    double f = 1.0;
    for (const auto& v : vars) f *= cdf(v, u);
    out += std::pow(u, q) * (f - prev_f);
    prev_f = f;
  }
  return out;
}

}  // namespace matconc::internal
