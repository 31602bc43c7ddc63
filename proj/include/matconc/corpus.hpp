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

#include "matconc/bounds.hpp"
#include "matconc/rng.hpp"

namespace matconc {

// Seeded generators for the verification corpora. Everything is a pure
// function of the generator state, so suite runs are reproducible.

HermMatrix random_herm(Index d, SplitMix64& rng, double scale = 1.0);
RectMatrix random_rect(Index rows, Index cols, SplitMix64& rng);

// Index-symmetric arrays (A[i1][i2] == A[i2][i1]) by default; those double as
// product-kernel coefficients. symmetric=false exercises the general case.
ChaosCoefficients random_chaos(int n, Index d, SplitMix64& rng, bool symmetric = true);

// Random finite law with strictly positive probabilities; standardized
// payloads are exactly centered with unit variance (affine rescaling).
DiscreteDistribution random_distribution(int s, SplitMix64& rng, bool standardized = false);

// Permutation-symmetric table with no degeneracy structure.
KernelTable random_symmetric_kernel(int n, Index d, int s, SplitMix64& rng);

// Completely degenerate table: the second-order Hoeffding projection of a
// random symmetric table (re-drawn if the projection collapses to ~zero).
KernelTable random_degenerate_kernel(int n, Index d, const DiscreteDistribution& p,
                                     SplitMix64& rng);

std::vector<MatrixLaw> random_matrix_laws(int count, Index d, int support, SplitMix64& rng,
                                          bool psd = false);
std::vector<ScalarLaw> random_scalar_laws(int count, int support, SplitMix64& rng);

// Rademacher-scaled fixed matrices: law of eps_i B_i. Bounded, mean zero.
std::vector<MatrixLaw> rademacher_scaled_laws(const std::vector<HermMatrix>& bs);

// Random PSD matrix of size d1 + d2 (for the block-norm check).
HermMatrix random_psd(Index dim, SplitMix64& rng);

}  // namespace matconc
