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

#include "matconc/corpus.hpp"

#include <cmath>

namespace matconc {

HermMatrix random_herm(Index d, SplitMix64& rng, double scale) {
  Matrix m(d, d);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) m(r, c) = Complex(rng.gaussian(), rng.gaussian());
  }
  return HermMatrix(Matrix(scale * 0.5 * (m + m.adjoint().eval())));
}

RectMatrix random_rect(Index rows, Index cols, SplitMix64& rng) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = Complex(rng.gaussian(), rng.gaussian());
  }
  return RectMatrix(std::move(m));
}

ChaosCoefficients random_chaos(int n, Index d, SplitMix64& rng, bool symmetric) {
  std::vector<HermMatrix> blocks(static_cast<size_t>(n) * n, HermMatrix::zero(d));
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      if (symmetric && i2 < i1) continue;
      blocks[static_cast<size_t>(i1) * n + i2] = random_herm(d, rng);
    }
  }
  if (symmetric) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < i1; ++i2) {
        blocks[static_cast<size_t>(i1) * n + i2] = blocks[static_cast<size_t>(i2) * n + i1];
      }
    }
  }
  return ChaosCoefficients(n, d, std::move(blocks));
}

DiscreteDistribution random_distribution(int s, SplitMix64& rng, bool standardized) {
  if (s < 1) throw InvalidInputError("random_distribution: s must be >= 1");
  if (standardized && s < 2) {
    throw InvalidInputError("random_distribution: standardization needs s >= 2");
  }
  std::vector<DiscreteDistribution::Point> pts(static_cast<size_t>(s));
  while (true) {
    double total = 0.0;
    for (int i = 0; i < s; ++i) {
      pts[static_cast<size_t>(i)].label = "p" + std::to_string(i);
      pts[static_cast<size_t>(i)].payload = rng.gaussian();
      pts[static_cast<size_t>(i)].prob = 0.05 + rng.uniform01();
      total += pts[static_cast<size_t>(i)].prob;
    }
    for (auto& pt : pts) pt.prob /= total;
    // Normalization leaves a last-bit defect; absorb it in the final point.
    double acc = 0.0;
    for (int i = 0; i + 1 < s; ++i) acc += pts[static_cast<size_t>(i)].prob;
    pts[static_cast<size_t>(s - 1)].prob = 1.0 - acc;

    if (!standardized) break;
    double mean = 0.0, second = 0.0;
    for (const auto& pt : pts) mean += pt.prob * pt.payload;
    for (const auto& pt : pts) second += pt.prob * (pt.payload - mean) * (pt.payload - mean);
    if (second < 1e-6) continue;
    const double sd = std::sqrt(second);
    for (auto& pt : pts) pt.payload = (pt.payload - mean) / sd;
    // Re-center once more to push the residual mean to the last ulps.
    double mean2 = 0.0;
    for (const auto& pt : pts) mean2 += pt.prob * pt.payload;
    for (auto& pt : pts) pt.payload -= mean2;
    break;
  }
  return DiscreteDistribution(std::move(pts));
}

KernelTable random_symmetric_kernel(int n, Index d, int s, SplitMix64& rng) {
  // Fill ordered pairs (i1 < i2) freely; the mirrored entries are forced by
  // permutation symmetry.
  std::vector<Matrix> upper(static_cast<size_t>(n) * n * s * s, Matrix());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = i1 + 1; i2 < n; ++i2) {
      for (int x = 0; x < s; ++x) {
        for (int y = 0; y < s; ++y) {
          upper[((static_cast<size_t>(i1) * n + i2) * s + x) * s + y] = random_herm(d, rng).mat();
        }
      }
    }
  }
  return KernelTable(n, d, s, [&](int i1, int i2, int x, int y) -> Matrix {
    if (i1 < i2) return upper[((static_cast<size_t>(i1) * n + i2) * s + x) * s + y];
    return upper[((static_cast<size_t>(i2) * n + i1) * s + y) * s + x];
  });
}

KernelTable random_degenerate_kernel(int n, Index d, const DiscreteDistribution& p,
                                     SplitMix64& rng) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    KernelTable raw = random_symmetric_kernel(n, d, p.size(), rng);
    KernelTable pi2 = pi_project(raw, p).pi2;
    if (pi2.max_value_norm() > 1e-6) return pi2;
  }
  throw Error(ErrorKind::Internal, "random_degenerate_kernel: projection kept collapsing");
}

std::vector<MatrixLaw> random_matrix_laws(int count, Index d, int support, SplitMix64& rng,
                                          bool psd) {
  std::vector<MatrixLaw> laws;
  laws.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    MatrixLaw law;
    double total = 0.0;
    std::vector<double> w(static_cast<size_t>(support));
    for (int k = 0; k < support; ++k) {
      total += w[static_cast<size_t>(k)] = 0.05 + rng.uniform01();
      if (psd) {
        Matrix g(d, d);
        for (Index r = 0; r < d; ++r) {
          for (Index c = 0; c < d; ++c) g(r, c) = Complex(rng.gaussian(), rng.gaussian());
        }
        law.values.emplace_back(Matrix(g * g.adjoint()));
      } else {
        law.values.push_back(random_herm(d, rng));
      }
    }
    double acc = 0.0;
    for (int k = 0; k < support; ++k) {
      w[static_cast<size_t>(k)] /= total;
      if (k + 1 == support) w[static_cast<size_t>(k)] = 1.0 - acc;
      acc += w[static_cast<size_t>(k)];
      law.probs.push_back(w[static_cast<size_t>(k)]);
    }
    laws.push_back(std::move(law));
  }
  return laws;
}

std::vector<ScalarLaw> random_scalar_laws(int count, int support, SplitMix64& rng) {
  std::vector<ScalarLaw> laws;
  laws.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    ScalarLaw law;
    double total = 0.0;
    std::vector<double> w(static_cast<size_t>(support));
    for (int k = 0; k < support; ++k) {
      law.values.push_back(rng.gaussian());
      total += w[static_cast<size_t>(k)] = 0.05 + rng.uniform01();
    }
    double acc = 0.0;
    for (int k = 0; k < support; ++k) {
      w[static_cast<size_t>(k)] /= total;
      if (k + 1 == support) w[static_cast<size_t>(k)] = 1.0 - acc;
      acc += w[static_cast<size_t>(k)];
      law.probs.push_back(w[static_cast<size_t>(k)]);
    }
    laws.push_back(std::move(law));
  }
  return laws;
}

std::vector<MatrixLaw> rademacher_scaled_laws(const std::vector<HermMatrix>& bs) {
  std::vector<MatrixLaw> laws;
  laws.reserve(bs.size());
  for (const auto& b : bs) {
    MatrixLaw law;
    law.values.push_back(b);
    law.values.emplace_back(Matrix(-b.mat()));
    law.probs = {0.5, 0.5};
    laws.push_back(std::move(law));
  }
  return laws;
}

HermMatrix random_psd(Index dim, SplitMix64& rng) {
  Matrix g(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) g(r, c) = Complex(rng.gaussian(), rng.gaussian());
  }
  return HermMatrix(Matrix(g * g.adjoint()));
}

}  // namespace matconc
