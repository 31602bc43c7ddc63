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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "matconc/corpus.hpp"
#include "matconc/fixtures.hpp"
#include "oracles.hpp"

using namespace matconc;

TEST_CASE("example 1 closed forms") {
  SUBCASE("n=4, d=4") {
    VarianceProxies vp = variance_proxies(*build_example1(4, 4).coeffs);
    CHECK(vp.sum_sq_norm == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(vp.gg_star_norm >= 8.0 - 1e-9);
  }
  SUBCASE("n=2 lower bound degenerates to zero") {
    ExampleInstance inst = build_example1(2, 2);
    CHECK(inst.expected.at("gg_star_norm_lower") == 0.0);
    CHECK(variance_proxies(*inst.coeffs).gg_star_norm >= 0.0);
  }
  SUBCASE("n=6, d=8: sum of squares has norm 10") {
    VarianceProxies vp = variance_proxies(*build_example1(6, 8).coeffs);
    CHECK(vp.sum_sq_norm == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("d < n rejected") { CHECK_THROWS_AS(build_example1(4, 3), InvalidInputError); }
}

TEST_CASE("example 2 closed forms") {
  SUBCASE("n=4, d=4: (1, 2, 4)") {
    VarianceProxies vp = variance_proxies(*build_example2(4, 4).coeffs);
    CHECK(vp.gg_star_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vp.sum_sq_norm == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(vp.row_sum_total == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("n=8, d=8: (1, 2, 8)") {
    VarianceProxies vp = variance_proxies(*build_example2(8, 8).coeffs);
    CHECK(vp.gg_star_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vp.sum_sq_norm == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(vp.row_sum_total == doctest::Approx(8.0).epsilon(1e-12));
  }
  SUBCASE("odd n rejected") { CHECK_THROWS_AS(build_example2(5, 6), InvalidInputError); }
  SUBCASE("the coefficient matrix C is orthogonal with zero diagonal") {
    // Reconstruct c from the built coefficients: c_{i,j} is the (i,j) scalar
    // in front of the symmetric outer product.
    ExampleInstance inst = build_example2(6, 6);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(6, 6);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        if (i != j) c(i, j) = inst.coeffs->at(i, j)(i, j).real();
      }
    }
    CHECK((c * c.transpose() - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-14);
    for (int i = 0; i < 6; ++i) CHECK(c(i, i) == 0.0);
  }
}

TEST_CASE("rotation invariance of the variance proxies") {
  // Conjugating every coefficient by one unitary changes none of the norms,
  // so the standard-basis choice in the builders is immaterial.
  SplitMix64 rng(61);
  ExampleInstance inst = build_example2(4, 4);
  HermMatrix gen = random_herm(4, rng);
  // Unitary from the eigenvectors of a random Hermitian matrix.
  Eigen::SelfAdjointEigenSolver<Matrix> es(gen.mat());
  Matrix u = es.eigenvectors();
  std::vector<HermMatrix> rotated;
  for (int i1 = 0; i1 < 4; ++i1) {
    for (int i2 = 0; i2 < 4; ++i2) {
      rotated.emplace_back(Matrix(u * inst.coeffs->at(i1, i2) * u.adjoint()));
    }
  }
  VarianceProxies vp = variance_proxies(ChaosCoefficients(4, 4, rotated));
  VarianceProxies ref = variance_proxies(*inst.coeffs);
  CHECK(vp.gg_star_norm == doctest::Approx(ref.gg_star_norm).epsilon(1e-9));
  CHECK(vp.sum_sq_norm == doctest::Approx(ref.sum_sq_norm).epsilon(1e-9));
  CHECK(vp.row_sum_total == doctest::Approx(ref.row_sum_total).epsilon(1e-9));
}

TEST_CASE("polynomial chaos fixture") {
  SplitMix64 rng(62);
  SUBCASE("Rademacher payloads: E max |X|^{2q} = 1, bounded case with M = 1") {
    ChaosCoefficients a = random_chaos(3, 2, rng, /*symmetric=*/true);
    DiscreteDistribution rad = DiscreteDistribution::rademacher();
    ExampleInstance inst = build_polynomial_chaos(a, rad);
    auto terms = polynomial_chaos_terms(inst, 2.0);
    CHECK(terms.at("emax_2q") == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("zero coefficients give zero terms") {
    ChaosCoefficients z(2, 2, std::vector<HermMatrix>(4, HermMatrix::zero(2)));
    DiscreteDistribution rad = DiscreteDistribution::rademacher();
    ExampleInstance inst = build_polynomial_chaos(z, rad);
    auto terms = polynomial_chaos_terms(inst, 1.0);
    CHECK(terms.at("value") == 0.0);
  }
  SUBCASE("three-point law: terms cross-checked by enumeration") {
    ChaosCoefficients a = random_chaos(3, 2, rng, /*symmetric=*/true);
    const double s2 = std::sqrt(2.0);
    DiscreteDistribution law({{"-s2", -s2, 0.25}, {"0", 0.0, 0.5}, {"+s2", s2, 0.25}});
    ExampleInstance inst = build_polynomial_chaos(a, law);
    const double q = 1.0;
    auto terms = polynomial_chaos_terms(inst, q);
    // Direct product enumeration of E max |X_i|^{2q} over 3^3 outcomes.
    double direct = 0.0;
    for (int c0 = 0; c0 < 3; ++c0) {
      for (int c1 = 0; c1 < 3; ++c1) {
        for (int c2 = 0; c2 < 3; ++c2) {
          const double w = law.prob(c0) * law.prob(c1) * law.prob(c2);
          const double m = std::max({std::abs(law.payload(c0)), std::abs(law.payload(c1)),
                                     std::abs(law.payload(c2))});
          direct += w * std::pow(m, 2.0 * q);
        }
      }
    }
    CHECK(terms.at("emax_2q") == doctest::Approx(direct).epsilon(1e-13));
    VarianceProxies vp = variance_proxies(a);
    const double r = std::max(q, 1.0 + std::log(2.0));
    double max_row = 0.0;
    for (double v : vp.row_sq_norms) max_row = std::max(max_row, v);
    const double expect_r = r * (std::sqrt(vp.sum_sq_norm) +
                                 std::pow(direct, 0.5 / q) * std::sqrt(vp.gg_star_norm));
    const double expect_r32 = std::pow(r, 1.5) * std::sqrt(max_row) * std::pow(direct, 1.0 / q);
    CHECK(terms.at("term_r") == doctest::Approx(expect_r).epsilon(1e-12));
    CHECK(terms.at("term_r32") == doctest::Approx(expect_r32).epsilon(1e-12));
  }
  SUBCASE("laws must be centered with unit variance") {
    ChaosCoefficients a = random_chaos(2, 2, rng, /*symmetric=*/true);
    DiscreteDistribution shifted({{"a", 0.5, 0.5}, {"b", 1.5, 0.5}});
    CHECK_THROWS_AS(build_polynomial_chaos(a, shifted), InvalidInputError);
    DiscreteDistribution wide({{"a", -2.0, 0.5}, {"b", 2.0, 0.5}});
    CHECK_THROWS_AS(build_polynomial_chaos(a, wide), InvalidInputError);
  }
  SUBCASE("product kernel needs index-symmetric coefficients") {
    ChaosCoefficients a = random_chaos(3, 2, rng, /*symmetric=*/false);
    CHECK_THROWS_AS(product_kernel(a, DiscreteDistribution::rademacher()), InvalidInputError);
  }
}

TEST_CASE("expected_max_abs_pow against the product CDF definition") {
  DiscreteDistribution law({{"a", -2.0, 0.3}, {"b", 0.5, 0.7}});
  // n = 2 by hand: max payload magnitudes are 2 (prob 1 - 0.49) and 0.5.
  const double expect = 0.49 * std::pow(0.5, 3.0) + (1.0 - 0.49) * std::pow(2.0, 3.0);
  CHECK(expected_max_abs_pow(law, 2, 3.0) == doctest::Approx(expect).epsilon(1e-14));
}
