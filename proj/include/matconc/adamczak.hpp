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

#include "matconc/bounds.hpp"

namespace matconc {

// f(phi) = sum_j w_j (phi* M_j phi)^2 over the unit sphere, the quartic whose
// supremum realizes the B term. The nuclear-ball supremum is attained at a
// rank-one extreme point, which reduces it to this sphere problem.
struct QuadFormObjective {
  Index d = 0;
  std::vector<Matrix> mats;
  std::vector<double> weights;
};

QuadFormObjective quadform_from_kernel(const KernelTable& h, const DiscreteDistribution& p);

struct SphereSupResult {
  double sup_estimate = 0.0;  // best ascent value; never exceeds the relaxation
  double relaxation = 0.0;    // ||sum w M^2||, the closed-form cap
  int restarts = 0;
  int iterations = 0;  // total ascent iterations across restarts
};

// Projected gradient ascent over unit vectors with exact line search on each
// step (the directional derivative is a quartic polynomial; its real roots
// come from a companion matrix). 32 seeded restarts by default, convergence
// at tangent gradient norm 1e-10.
SphereSupResult sphere_sup_estimate(const QuadFormObjective& objective, int restarts = 32,
                                    std::uint64_t seed = 0x51eeeULL);

struct AdamczakTerms {
  double a = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  double d_term = 0.0;
  enum class Variant { Full, Simplified } variant = Variant::Full;
  double mean_norm_estimate = 0.0;  // E||U_n|| proxy: log(d) assembly at q = 1, unit constant
  // Diagnostics.
  double b_sup = 0.0;          // sup of the quadratic-in-Phi functional (B^2)
  double b_relaxation = 0.0;   // ||sum E H^2||
  double gamma_core = 0.0;     // (sum_i1 E ||sum_{i2!=i1} E2 H^2||^q)^{1/2q}
  double gamma_alt = 0.0;      // same core under the 2x prefactor convention
};

AdamczakTerms adamczak_terms(KernelExpectations& ke, double q, AdamczakTerms::Variant variant,
                             const Constants& constants = {}, int restarts = 32,
                             std::uint64_t seed = 0x51eeeULL);

BoundReport adamczak_terms_report(const AdamczakTerms& terms, double q);

// C (mean + sqrt(q) A + q B + q^{3/2} Gamma + q^2 D); the tail form requires
// t >= 2 and carries probability e^{-t}.
BoundReport adamczak_moment_tail(const AdamczakTerms& terms, double mean, double q_or_t,
                                 bool tail_form, const Constants& constants = {});

}  // namespace matconc
