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

#include "matconc/fixtures.hpp"

#include <cmath>

#include "internal.hpp"

namespace matconc {

namespace {

Matrix sym_outer(Index d, int i, int j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) += 1.0;
  m(j, i) += 1.0;
  return m;
}

bool coeffs_index_symmetric(const ChaosCoefficients& a) {
  for (int i1 = 0; i1 < a.n(); ++i1) {
    for (int i2 = i1 + 1; i2 < a.n(); ++i2) {
      if (max_abs(a.at(i1, i2) - a.at(i2, i1)) > 1e-12 * std::max(1.0, max_abs(a.at(i1, i2)))) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

ExampleInstance build_example1(int n, Index d) {
  if (n < 2) throw InvalidInputError("build_example1: n must be >= 2");
  if (d < n) throw InvalidInputError("build_example1: requires d >= n");
  std::vector<HermMatrix> blocks;
  blocks.reserve(static_cast<size_t>(n) * n);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      blocks.emplace_back(i1 == i2 ? Matrix::Zero(d, d) : sym_outer(d, i1, i2));
    }
  }
  ExampleInstance inst;
  inst.name = "example1";
  inst.n = n;
  inst.d = d;
  inst.coeffs = ChaosCoefficients(n, d, std::move(blocks));
  inst.expected["sum_sq_norm"] = 2.0 * (n - 1);
  inst.expected["gg_star_norm_lower"] = static_cast<double>(n - 2) * n;
  return inst;
}

ExampleInstance build_example2(int n, Index d) {
  if (n < 2 || n % 2 != 0) throw InvalidInputError("build_example2: n must be even and >= 2");
  if (d < n) throw InvalidInputError("build_example2: requires d >= n");
  // Pair-swap permutation: c_{2k,2k+1} = c_{2k+1,2k} = 1. Orthogonal with
  // zero diagonal, the simplest matrix meeting the hypotheses.
  auto c = [&](int i, int j) { return (i / 2 == j / 2 && i != j) ? 1.0 : 0.0; };
  std::vector<HermMatrix> blocks;
  blocks.reserve(static_cast<size_t>(n) * n);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2 || c(i1, i2) == 0.0) {
        blocks.emplace_back(Matrix::Zero(d, d));
      } else {
        blocks.emplace_back(Matrix(c(i1, i2) * sym_outer(d, i1, i2)));
      }
    }
  }
  ExampleInstance inst;
  inst.name = "example2";
  inst.n = n;
  inst.d = d;
  inst.coeffs = ChaosCoefficients(n, d, std::move(blocks));
  inst.expected["gg_star_norm"] = 1.0;
  inst.expected["sum_sq_norm"] = 2.0;
  inst.expected["row_sum_total"] = static_cast<double>(n);
  return inst;
}

KernelTable product_kernel(const ChaosCoefficients& a, const DiscreteDistribution& law) {
  if (!coeffs_index_symmetric(a)) {
    throw InvalidInputError("product_kernel: coefficients must satisfy A[i1][i2] == A[i2][i1]");
  }
  return KernelTable(a.n(), a.d(), law.size(), [&](int i1, int i2, int x, int y) -> Matrix {
    return law.payload(x) * law.payload(y) * a.at(i1, i2);
  });
}

ExampleInstance build_polynomial_chaos(const ChaosCoefficients& a,
                                       const DiscreteDistribution& x_law) {
  double mean = 0.0, second = 0.0;
  for (int i = 0; i < x_law.size(); ++i) {
    mean += x_law.prob(i) * x_law.payload(i);
    second += x_law.prob(i) * x_law.payload(i) * x_law.payload(i);
  }
  if (std::abs(mean) > 1e-12) {
    throw InvalidInputError("build_polynomial_chaos: law is not centered (mean " +
                            std::to_string(mean) + ")");
  }
  if (std::abs(second - 1.0) > 1e-12) {
    throw InvalidInputError("build_polynomial_chaos: law does not have unit variance");
  }

  ExampleInstance inst;
  inst.name = "polynomial-chaos";
  inst.n = a.n();
  inst.d = a.d();
  inst.coeffs = a;
  inst.law = x_law;
  inst.kernel = product_kernel(a, x_law);
  VarianceProxies vp = variance_proxies(a);
  inst.expected["sum_sq_norm"] = vp.sum_sq_norm;
  inst.expected["gg_star_norm"] = vp.gg_star_norm;
  double max_row = 0.0;
  for (double r : vp.row_sq_norms) max_row = std::max(max_row, r);
  inst.expected["max_row_norm"] = max_row;
  return inst;
}

double expected_max_abs_pow(const DiscreteDistribution& law, int n, double pow) {
  if (n < 1) throw InvalidInputError("expected_max_abs_pow: n must be >= 1");
  std::vector<std::pair<double, double>> one;
  for (int i = 0; i < law.size(); ++i) one.emplace_back(std::abs(law.payload(i)), law.prob(i));
  std::vector<std::vector<std::pair<double, double>>> vars(static_cast<size_t>(n), one);
  return internal::expected_max_pow(std::move(vars), pow);
}

std::map<std::string, double> polynomial_chaos_terms(const ExampleInstance& inst, double q) {
  if (inst.name != "polynomial-chaos" || !inst.law) {
    throw InvalidInputError("polynomial_chaos_terms: needs a polynomial-chaos instance");
  }
  if (q < 1.0) throw InvalidInputError("polynomial_chaos_terms: q must be >= 1");
  const double d = static_cast<double>(inst.d);
  const double r = std::max(q, 1.0 + std::log(d));
  const double emax_2q = expected_max_abs_pow(*inst.law, inst.n, 2.0 * q);

  std::map<std::string, double> out;
  out["r"] = r;
  out["emax_2q"] = emax_2q;
  const double sum_sq = inst.expected.at("sum_sq_norm");
  const double gg = inst.expected.at("gg_star_norm");
  const double max_row = inst.expected.at("max_row_norm");
  out["term_r"] = r * (std::sqrt(sum_sq) + std::pow(emax_2q, 1.0 / (2.0 * q)) * std::sqrt(gg));
  out["term_r32"] = std::pow(r, 1.5) * std::sqrt(max_row) * std::pow(emax_2q, 1.0 / q);
  out["value"] = out["term_r"] + out["term_r32"];
  return out;
}

}  // namespace matconc
