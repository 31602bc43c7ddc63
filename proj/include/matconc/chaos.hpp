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

#include <cstdint>
#include <string>
#include <vector>

#include "matconc/constants.hpp"
#include "matconc/linalg.hpp"

namespace matconc {

// (E ||X||^{2q})^{1/(2q)} computed either by exhaustive enumeration or by
// seeded Monte Carlo. stderr is a jackknife estimate and is zero exactly for
// the enumeration method.
struct MomentEstimate {
  double q = 1.0;
  double value = 0.0;
  enum class Method { ExactEnumeration, MonteCarlo } method = Method::ExactEnumeration;
  double stderr_ = 0.0;
  long long replicas = 0;

  // One-line record: "method=... q=... value=... stderr=... replicas=..."
  std::string to_line() const;
  static MomentEstimate from_line(const std::string& line);
};

struct KhintchineBounds {
  double lower = 0.0;        // max{||GG*||, ||sum A^2||}^{1/2}
  double upper = 0.0;        // (4/sqrt(e)) * max(q, log d) * lower
  double naive_upper = 0.0;  // C * max(q, log(nd)) * lower, C pinned to 4/sqrt(e)
};

// One draw of || sum A_{i1,i2} eps1_{i1} eps2_{i2} ||. The seeded generator
// emits eps1[0..n), then eps2[0..n); deterministic given the seed.
double sample_chaos_norm(const ChaosCoefficients& a, std::uint64_t seed);

// Averages ||X||^{2q} over all 2^(2n) sign assignments, enumerated in
// ascending pattern order (bit i of the pattern -> eps1[i], bit n+i ->
// eps2[i], set bit = +1). Raises CapacityError above the cap.
MomentEstimate exact_chaos_moment(const ChaosCoefficients& a, double q, int cap_n = 7);

MomentEstimate mc_chaos_moment(const ChaosCoefficients& a, double q, long long replicas,
                               std::uint64_t seed);

KhintchineBounds khintchine_bounds(const ChaosCoefficients& a, double q,
                                   const Constants& constants = {});

// Trace identity and conditional Schatten dominance for a family of equal
// shape rectangular matrices (lambda from sum M*M, nu from sum MM*).
struct EigenCompareResult {
  double trace_gap = 0.0;     // |sum lambda - sum nu|
  bool condition_met = false; // max lambda <= (1/d) sum nu
  bool schatten_ok = false;   // sum nu^p >= sum lambda^p
  int p = 2;
};

EigenCompareResult eigen_compare_check(const std::vector<RectMatrix>& ms, int p = 2);

}  // namespace matconc
