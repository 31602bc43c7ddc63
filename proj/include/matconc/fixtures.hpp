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

#pragma once

#include <map>
#include <optional>
#include <string>

#include "matconc/ustat.hpp"

namespace matconc {

// Closed-form constructions with known variance-proxy values, used as exact
// regression fixtures.
struct ExampleInstance {
  std::string name;
  int n = 0;
  Index d = 0;
  std::optional<ChaosCoefficients> coeffs;
  std::optional<KernelTable> kernel;
  std::optional<DiscreteDistribution> law;
  std::map<std::string, double> expected;
};

// A_{i1,i2} = e_{i1} e_{i2}^T + e_{i2} e_{i1}^T over the standard basis.
// expected: sum_sq_norm = 2(n-1), gg_star_norm_lower = (n-2) n.
ExampleInstance build_example1(int n, Index d);

// A_{i1,i2} = c_{i1,i2} (e_{i1} e_{i2}^T + e_{i2} e_{i1}^T) with C the
// pair-swap permutation (orthogonal, zero diagonal). expected:
// gg_star_norm = 1, sum_sq_norm = 2, row_sum_total = n.
ExampleInstance build_example2(int n, Index d);

// H_{i1,i2}(x, y) = A_{i1,i2} x y for a centered unit-variance scalar law;
// realizes Y = sum_{i1 != i2} A_{i1,i2} X_{i1} X_{i2}. The coefficient array
// must be index-symmetric.
ExampleInstance build_polynomial_chaos(const ChaosCoefficients& a,
                                       const DiscreteDistribution& x_law);

// Kernel table H_{i1,i2}(x,y) = payload(x) payload(y) A_{i1,i2}; requires
// index-symmetric coefficients.
KernelTable product_kernel(const ChaosCoefficients& a, const DiscreteDistribution& law);

// E max_{1<=i<=n} |X_i|^pow for n i.i.d. copies of the law, exact.
double expected_max_abs_pow(const DiscreteDistribution& law, int n, double pow);

// The three assembled terms of the polynomial-chaos moment bound at a given
// q, with E max |X_i|^{2q} computed exactly. Keys: r, emax_2q, term_r,
// term_r32, value.
std::map<std::string, double> polynomial_chaos_terms(const ExampleInstance& inst, double q);

}  // namespace matconc
