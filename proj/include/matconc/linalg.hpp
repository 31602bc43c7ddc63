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

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "matconc/errors.hpp"

namespace matconc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

// Dense self-adjoint matrix. Construction symmetrizes (M + M*)/2 to absorb
// roundoff; asymmetry above 1e-12 relative to the entry scale is rejected.
class HermMatrix {
 public:
  explicit HermMatrix(Matrix m);
  static HermMatrix zero(Index d) { return HermMatrix(Matrix::Zero(d, d)); }
  static HermMatrix identity(Index d) { return HermMatrix(Matrix::Identity(d, d)); }

  Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

// Rectangular complex matrix with finite entries.
class RectMatrix {
 public:
  explicit RectMatrix(Matrix m);
  Index rows() const { return m_.rows(); }
  Index cols() const { return m_.cols(); }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

// Square array of n x n blocks, each d x d. The flat matrix is self-adjoint
// exactly when block(i,j) == block(j,i)^* for all pairs; that is not forced
// here because decoupled-sample block matrices legitimately break it.
class BlockHermMatrix {
 public:
  BlockHermMatrix(int blocks, Index block_dim);
  int blocks() const { return n_; }
  Index block_dim() const { return d_; }
  Index dim() const { return static_cast<Index>(n_) * d_; }

  void set_block(int i, int j, const Matrix& b);
  Eigen::Block<const Matrix> block(int i, int j) const;
  const Matrix& flat() const { return flat_; }
  bool is_self_adjoint(double tol = 1e-12) const;

 private:
  int n_;
  Index d_;
  Matrix flat_;
};

// Coefficient array of a Rademacher chaos of order 2: n x n self-adjoint
// blocks with zero diagonal. Chaos-specific operations live in chaos.hpp.
class ChaosCoefficients {
 public:
  ChaosCoefficients(int n, Index d, std::vector<HermMatrix> blocks);
  int n() const { return n_; }
  Index d() const { return d_; }
  const Matrix& at(int i1, int i2) const { return blocks_[static_cast<size_t>(i1) * n_ + i2].mat(); }
  ChaosCoefficients scaled(double c) const;

 private:
  int n_;
  Index d_;
  std::vector<HermMatrix> blocks_;  // row-major, diagonal entries are zero
};

// The competing variance quantities that drive every chaos bound.
struct VarianceProxies {
  double gg_star_norm = 0.0;           // ||G G*||
  double sum_sq_norm = 0.0;            // ||sum over ordered pairs of A^2||
  std::vector<double> row_sq_norms;    // ||sum_{i2 != i1} A^2_{i1,i2}|| per i1
  double row_sum_total = 0.0;          // sum of row_sq_norms
};

// Largest singular value. Hermitian input goes through a full self-adjoint
// eigendecomposition; rectangular input is routed through the dilation so
// there is a single numerical kernel.
double spectral_norm(const HermMatrix& m);
double spectral_norm(const RectMatrix& m);
double spectral_norm_raw(const Matrix& hermitian);  // no validation; square self-adjoint input

// [[0, A], [A*, 0]]; preserves the spectral norm, squares to diag(AA*, A*A).
HermMatrix hermitian_dilation(const RectMatrix& a);

BlockHermMatrix assemble_block_G(const ChaosCoefficients& a);
VarianceProxies variance_proxies(const ChaosCoefficients& a);

// tr((M*M)^(p/2)) style helpers used by the eigenvalue-comparison check.
double schatten_pow_psd(const Matrix& psd, int p);  // sum of eigenvalue^p, PSD input
double nuclear_norm(const Matrix& m);

// Eigenvalues of a self-adjoint matrix, ascending.
Eigen::VectorXd herm_eigenvalues(const Matrix& hermitian);

double max_abs(const Matrix& m);

}  // namespace matconc
