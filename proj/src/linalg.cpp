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

#include "matconc/linalg.hpp"

#include <cmath>
#include <string>

namespace matconc {

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

HermMatrix::HermMatrix(Matrix m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw InvalidInputError("HermMatrix: expected a square matrix with dim >= 1, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw InvalidInputError("HermMatrix: non-finite entries");
  }
  const double scale = std::max(1.0, max_abs(m));
  const double asym = max_abs(m - m.adjoint().eval());
  if (asym > 1e-12 * scale) {
    throw InvalidInputError("HermMatrix: asymmetry " + std::to_string(asym) +
                            " exceeds 1e-12 * scale; refusing to symmetrize");
  }
  m_ = 0.5 * (m + m.adjoint().eval());
}

RectMatrix::RectMatrix(Matrix m) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw InvalidInputError("RectMatrix: dimensions must be positive");
  }
  if (!m.allFinite()) {
    throw InvalidInputError("RectMatrix: non-finite entries");
  }
  m_ = std::move(m);
}

BlockHermMatrix::BlockHermMatrix(int blocks, Index block_dim) : n_(blocks), d_(block_dim) {
  if (blocks < 2) throw InvalidInputError("BlockHermMatrix: need n >= 2 blocks");
  if (block_dim < 1) throw InvalidInputError("BlockHermMatrix: block dim must be >= 1");
  flat_ = Matrix::Zero(dim(), dim());
}

void BlockHermMatrix::set_block(int i, int j, const Matrix& b) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw InvalidInputError("BlockHermMatrix: block index out of range");
  if (b.rows() != d_ || b.cols() != d_) throw InvalidInputError("BlockHermMatrix: block has wrong dimension");
  flat_.block(static_cast<Index>(i) * d_, static_cast<Index>(j) * d_, d_, d_) = b;
}

Eigen::Block<const Matrix> BlockHermMatrix::block(int i, int j) const {
  return flat_.block(static_cast<Index>(i) * d_, static_cast<Index>(j) * d_, d_, d_);
}

bool BlockHermMatrix::is_self_adjoint(double tol) const {
  return max_abs(flat_ - flat_.adjoint().eval()) <= tol * std::max(1.0, max_abs(flat_));
}

ChaosCoefficients::ChaosCoefficients(int n, Index d, std::vector<HermMatrix> blocks)
    : n_(n), d_(d), blocks_(std::move(blocks)) {
  if (n < 2) throw InvalidInputError("ChaosCoefficients: n must be >= 2");
  if (d < 1) throw InvalidInputError("ChaosCoefficients: d must be >= 1");
  if (blocks_.size() != static_cast<size_t>(n) * n) {
    throw InvalidInputError("ChaosCoefficients: expected n*n blocks");
  }
  double scale = 1.0;
  for (const auto& b : blocks_) {
    if (b.dim() != d) throw InvalidInputError("ChaosCoefficients: block dimension mismatch");
    scale = std::max(scale, max_abs(b.mat()));
  }
  for (int i = 0; i < n; ++i) {
    if (max_abs(at(i, i)) > 1e-12 * scale) {
      throw InvalidInputError("ChaosCoefficients: diagonal block (" + std::to_string(i) + "," +
                              std::to_string(i) + ") is not zero");
    }
  }
}

ChaosCoefficients ChaosCoefficients::scaled(double c) const {
  std::vector<HermMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.emplace_back(Matrix(c * b.mat()));
  return ChaosCoefficients(n_, d_, std::move(out));
}

Eigen::VectorXd herm_eigenvalues(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::Internal, "eigendecomposition failed");
  return es.eigenvalues();
}

double spectral_norm_raw(const Matrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  if (max_abs(hermitian) == 0.0) return 0.0;
  Eigen::VectorXd ev = herm_eigenvalues(hermitian);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double spectral_norm(const HermMatrix& m) { return spectral_norm_raw(m.mat()); }

double spectral_norm(const RectMatrix& m) {
  return spectral_norm_raw(hermitian_dilation(m).mat());
}

HermMatrix hermitian_dilation(const RectMatrix& a) {
  const Index d1 = a.rows(), d2 = a.cols();
  Matrix out = Matrix::Zero(d1 + d2, d1 + d2);
  out.block(0, d1, d1, d2) = a.mat();
  out.block(d1, 0, d2, d1) = a.mat().adjoint();
  return HermMatrix(std::move(out));
}

BlockHermMatrix assemble_block_G(const ChaosCoefficients& a) {
  BlockHermMatrix g(a.n(), a.d());
  for (int i1 = 0; i1 < a.n(); ++i1) {
    for (int i2 = 0; i2 < a.n(); ++i2) {
      if (i1 == i2) continue;
      g.set_block(i1, i2, a.at(i1, i2));
    }
  }
  return g;
}

VarianceProxies variance_proxies(const ChaosCoefficients& a) {
  const int n = a.n();
  const Index d = a.d();
  VarianceProxies out;

  BlockHermMatrix g = assemble_block_G(a);
  out.gg_star_norm = spectral_norm_raw(g.flat() * g.flat().adjoint());

  Matrix total = Matrix::Zero(d, d);
  out.row_sq_norms.resize(static_cast<size_t>(n), 0.0);
  for (int i1 = 0; i1 < n; ++i1) {
    Matrix row = Matrix::Zero(d, d);
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      const Matrix& b = a.at(i1, i2);
      row += b * b;
    }
    total += row;
    out.row_sq_norms[static_cast<size_t>(i1)] = spectral_norm_raw(row);
    out.row_sum_total += out.row_sq_norms[static_cast<size_t>(i1)];
  }
  out.sum_sq_norm = spectral_norm_raw(total);
  return out;
}

double schatten_pow_psd(const Matrix& psd, int p) {
  if (p < 1) throw InvalidInputError("schatten_pow_psd: p must be >= 1");
  Eigen::VectorXd ev = herm_eigenvalues(psd);
  double s = 0.0;
  for (Index i = 0; i < ev.size(); ++i) s += std::pow(std::max(ev(i), 0.0), p);
  return s;
}

double nuclear_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

}  // namespace matconc
