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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "matconc/chaos.hpp"
#include "matconc/linalg.hpp"

namespace matconc {

// Finite-support law. Points are opaque labels with a numeric payload; exact
// expectation is always a finite weighted sum.
class DiscreteDistribution {
 public:
  struct Point {
    std::string label;
    double payload = 0.0;
    double prob = 0.0;
  };

  explicit DiscreteDistribution(std::vector<Point> points);
  int size() const { return static_cast<int>(points_.size()); }
  const Point& point(int i) const { return points_[static_cast<size_t>(i)]; }
  double prob(int i) const { return points_[static_cast<size_t>(i)].prob; }
  double payload(int i) const { return points_[static_cast<size_t>(i)].payload; }

  static DiscreteDistribution rademacher();

 private:
  std::vector<Point> points_;
};

// H_{i1,i2}(x, y) as a table of self-adjoint d x d values over support x
// support, for ordered pairs (i1, i2) with i1 != i2. Permutation symmetry
// H_{i1,i2}(x,y) == H_{i2,i1}(y,x) is validated at construction (1e-12
// relative) rather than repaired: an asymmetric table is a caller bug.
class KernelTable {
 public:
  using Builder = std::function<Matrix(int i1, int i2, int x, int y)>;

  KernelTable(int n, Index d, int support, const Builder& fill);
  int n() const { return n_; }
  Index d() const { return d_; }
  int support() const { return s_; }
  const Matrix& at(int i1, int i2, int x, int y) const;
  double max_value_norm() const { return max_value_norm_; }  // max spectral norm over the table
  KernelTable scaled(double c) const;

 private:
  size_t index(int i1, int i2, int x, int y) const {
    return ((static_cast<size_t>(i1) * n_ + i2) * s_ + x) * s_ + y;
  }

  int n_;
  Index d_;
  int s_;
  std::vector<Matrix> values_;  // ((i1 * n + i2) * s + x) * s + y
  double max_value_norm_ = 0.0;
};

// Indices into the support: one coupled sample, or two decoupled samples.
struct SampleConfig {
  std::vector<int> x1;
  std::optional<std::vector<int>> x2;
};

enum class UMode { Coupled, Decoupled };

// Exact Hoeffding decomposition of a permutation-symmetric kernel:
//   H_{i1,i2}(x,y) = mean(i1,i2) + pi1(i1,i2)(x) + pi1(i2,i1)(y) + pi2(x,y),
// where pi1(i1,i2) projects onto the first argument. For kernels symmetric
// in their arguments the two pi1 entries coincide and the identity reads
// H = mean + pi1(x) + pi1(y) + pi2(x,y). pi2 is completely degenerate.
struct HoeffdingParts {
  int n = 0;
  Index d = 0;
  int support = 0;
  std::vector<Matrix> mean;  // n*n, row-major, diagonal zero
  std::vector<Matrix> pi1;   // (i1*n + i2)*s + x
  const Matrix& mean_at(int i1, int i2) const;
  const Matrix& pi1_at(int i1, int i2, int x) const;
  KernelTable pi2;
};

HoeffdingParts pi_project(const KernelTable& h, const DiscreteDistribution& p);

// Largest norm of a conditional mean sum_y p(y) H_{i1,i2}(x, y) over all
// (i1, i2, x). Zero for completely degenerate kernels.
double degeneracy_defect(const KernelTable& h, const DiscreteDistribution& p);

// True iff the defect is at most tol (absolute).
bool degeneracy_check(const KernelTable& h, const DiscreteDistribution& p, double tol);

// Default degeneracy gate used by the bound evaluators: 1e-9 absolute after
// normalizing the kernel to unit max norm.
bool degeneracy_check_normalized(const KernelTable& h, const DiscreteDistribution& p,
                                 double tol = 1e-9);

// Coupled sum over ordered pairs when cfg.x2 is absent, decoupled otherwise.
HermMatrix evaluate_U(const KernelTable& h, const SampleConfig& cfg);

// Probability-weighted average of ||U||^{2q} over every sample configuration,
// enumerated in mixed-radix lexicographic order (first coordinate most
// significant). Raises CapacityError when s^n (coupled) or s^(2n) (decoupled)
// exceeds the cap.
MomentEstimate exact_U_moment(const KernelTable& h, const DiscreteDistribution& p, double q,
                              UMode mode, long long cap = 1LL << 16);

MomentEstimate mc_U_moment(const KernelTable& h, const DiscreteDistribution& p, double q,
                           UMode mode, long long replicas, std::uint64_t seed);

// Moment of the sign-randomized decoupled statistic
//   sum eps1_{i1} eps2_{i2} H_{i1,i2}(X^{(1)}_{i1}, X^{(2)}_{i2}),
// enumerated exactly over signs x samples. Used by the symmetrization check.
MomentEstimate exact_randomized_U_moment(const KernelTable& h, const DiscreteDistribution& p,
                                         double q, long long cap = 1LL << 17);

// Block matrix with (i1, i2) block H_{i1,i2}(x1[i1], x2[i2]) off the
// diagonal. Requires a decoupled config.
BlockHermMatrix assemble_Gtilde(const KernelTable& h, const SampleConfig& cfg);

// E2[Gtilde Gtilde*] with the expectation over the second sample taken
// exactly: block (i,j) = sum_{k != i,j} sum_y p(y) H_{i,k}(x1[i], y) H_{j,k}(x1[j], y).
// Self-adjoint and positive semidefinite.
HermMatrix e2_gg_star(const KernelTable& h, const DiscreteDistribution& p,
                      const std::vector<int>& x1);

}  // namespace matconc
