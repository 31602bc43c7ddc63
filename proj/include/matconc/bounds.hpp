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
#include <map>
#include <vector>

#include "matconc/constants.hpp"
#include "matconc/report.hpp"
#include "matconc/ustat.hpp"

namespace matconc {

// Finite-support law of one independent matrix summand.
struct MatrixLaw {
  std::vector<HermMatrix> values;
  std::vector<double> probs;
};

// Finite-support law of one independent scalar variable.
struct ScalarLaw {
  std::vector<double> values;
  std::vector<double> probs;
};

struct TailBound {
  double threshold = 0.0;
  double prob = 1.0;
};

// One exactly-computed expectation term; stderr is nonzero only when the
// enumeration cap forced a Monte Carlo fallback.
struct TermValue {
  double value = 0.0;
  double stderr_ = 0.0;
  bool exact = true;
};

// Exact (enumeration-backed) expectation terms of a degenerate kernel over
// the decoupled samples. Everything the moment bounds consume is memoized
// here so the theorem, corollary, refined and Adamczak assemblies share one
// set of numbers.
class KernelExpectations {
 public:
  KernelExpectations(const KernelTable& h, const DiscreteDistribution& p,
                     long long cap = 1LL << 16, long long mc_replicas = 20000,
                     std::uint64_t mc_seed = 0x5eedULL);

  const KernelTable& kernel() const { return h_; }
  const DiscreteDistribution& law() const { return p_; }

  // ||sum over ordered pairs of E H^2||^{1/2}
  double t_var() const { return t_var_; }
  // (sum_{i1} E || sum_{i2 != i1} E2 H^2 ||)^{1/2}
  double row_sum_sqrt() const { return row_sum_sqrt_; }
  // (E max_{i1} || sum_{i2 != i1} H^2 ||^q)^{1/(2q)}; full decoupled enumeration
  TermValue t_max(double q);
  // (E || E2 G G* ||^q)^{1/(2q)}
  TermValue t_g(double q);
  // (E max_{i1} || sum_{i2 != i1} E2 H^2 ||^q)^{1/(2q)}
  double t_max_e2(double q);
  // (sum_{i1} E max_{i2 != i1} || H^2 ||^q)^{1/(2q)}
  double t_rowmax(double q);
  // (E || sum over ordered pairs of E2 H^2 (x1) ||^q)^{1/(2q)}; lower-bound term
  TermValue l_sum(double q);
  // (sum_{i1} E || sum_{i2 != i1} E2 H^2 ||^q)^{1/(2q)}; Adamczak Gamma core
  double gamma_sum(double q);
  // (sum over ordered pairs of E || H^2 ||^q)^{1/(2q)}; Adamczak D core
  double d_sum(double q);
  // E || E2 H^2(X, .) || for one pair; identical-kernel concentration input
  double e_e2h2_norm(int i1 = 0, int i2 = 1) const;
  // || sum_{i2 != i1} E2 H^2_{i1,i2}(x, .) ||, tabulated
  double rho(int i1, int x) const { return rho_[static_cast<size_t>(i1) * s_ + x]; }

 private:
  struct PairTerm {
    TermValue tg;     // per-q
    TermValue lsum;   // per-q
  };
  const Matrix& e2h2(int i1, int i2, int x) const {
    return e2h2_[(static_cast<size_t>(i1) * n_ + i2) * s_ + x];
  }
  void first_sample_pass(double q, PairTerm& out);

  KernelTable h_;
  DiscreteDistribution p_;
  long long cap_;
  long long mc_replicas_;
  std::uint64_t mc_seed_;
  int n_;
  int s_;
  Index d_;
  double t_var_ = 0.0;
  double row_sum_sqrt_ = 0.0;
  std::vector<Matrix> e2h2_;        // (i1*n + i2)*s + x
  std::vector<Matrix> row_e2_;      // i1*s + x: sum_{i2 != i1} e2h2
  std::vector<double> rho_;         // norms of row_e2_
  std::vector<double> h2_norm_;     // ((i1*n + i2)*s + x)*s + y: ||H||^2
  std::map<double, TermValue> t_max_memo_;
  std::map<double, PairTerm> sample_memo_;
};

// Rosenthal-type moment bound for independent self-adjoint summands:
//   2 sqrt(er) ||(sum E (Y - EY)^2)^{1/2}|| + 4 sqrt(2) er (E max ||Y - EY||^{2q})^{1/(2q)},
// r = max(q, log d). Non-integer q is accepted but flagged: the stated
// hypothesis requires integer q.
BoundReport rosenthal_moment_bound(const std::vector<MatrixLaw>& laws, double q,
                                   const Constants& constants = {});

// PSD version: ||sum EY||^{1/2} + 2 sqrt(2er) (E max ||Y||^q)^{1/(2q)},
// bounding (E || sum Y ||^q)^{1/(2q)}. Includes the enumerated oracle when
// the product support fits under the cap.
BoundReport rosenthal_psd_bound(const std::vector<MatrixLaw>& laws, double q,
                                long long oracle_cap = 1LL << 16,
                                const Constants& constants = {});

// (E || sum_i (Y_i - center_i) ||^pow) over the product law, centers = EY_i
// when centered. Oracle helper; raises CapacityError above the cap.
double enumerate_sum_norm_pow(const std::vector<MatrixLaw>& laws, double pow, bool centered,
                              long long cap = 1LL << 16);

// Threshold 2 sigma sqrt(u) + (4/3) B u with probability min(1, 2d e^{-u}).
TailBound bernstein_tail_bound(double sigma2, double b, int d, double u);

// Moment form composed from the Bernstein tail and the tail-to-moment
// conversion, so no fresh constant is introduced.
BoundReport bernstein_moment_bound(double sigma2, double b, int d, double q,
                                   const Constants& constants = {});

enum class TheoremVariant { Full, Corollary, Refined };

// Moment bound for degenerate U-statistics of order 2, r = max(q, log(ed)).
//   full:      128/sqrt(e) [16 r^{3/2} T_max + r T_var + r T_G]
//   corollary: 256/sqrt(e) [r RowSum + 11 r^{3/2} T_max]
//   refined:   full with the T_max term expanded through its remainder bound,
//              prefactor 4e sqrt(2) sqrt(1 + log(d)/q)
BoundReport theorem_moment_bound(KernelExpectations& ke, double q, TheoremVariant variant,
                                 const Constants& constants = {});
BoundReport theorem_moment_bound(const KernelTable& h, const DiscreteDistribution& p, double q,
                                 TheoremVariant variant, const Constants& constants = {});

// The three matching lower-bound terms, summed with configurable C
// (default 1; the source fixes no value).
BoundReport lower_bound_terms(KernelExpectations& ke, double q, const Constants& constants = {});

// Tail bound for identical bounded degenerate kernels, t >= 1. The threshold
// is the corollary moment bound composed with moment_to_tail; no constant is
// hardcoded. For t in [1,2) the threshold is evaluated at u = 2, which keeps
// the stated probability valid.
TailBound concentration_tail(KernelExpectations& ke, double kernel_bound_m, double t,
                             const Constants& constants = {}, BoundReport* report = nullptr);

// e (a4 u^2 + a3 u^{3/2} + a2 u + a1 sqrt(u) + a0); requires u >= 2.
double moment_to_tail(double a0, double a1, double a2, double a3, double a4, double u);

// C (a0 + a1 sqrt(p) + a2 p); requires p >= 1. C defaults to 4.
double tail_to_moment(double a0, double a1, double a2, double p, const Constants& constants = {});

// q^{alpha q} sum E|xi|^q <= 2 (1 + q^alpha) max(q^{alpha q} E max |xi|^q, (sum E|xi|)^q),
// both sides exact. value = right side, oracle = left side.
BoundReport sum_max_bound(const std::vector<ScalarLaw>& xis, double q, double alpha);

}  // namespace matconc
