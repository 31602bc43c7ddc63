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

#include <limits>
#include <sstream>

#include "matconc/corpus.hpp"
#include "matconc/fixtures.hpp"
#include "matconc/matio.hpp"
#include "oracles.hpp"

using namespace matconc;

TEST_CASE("HermMatrix symmetrizes small asymmetry and rejects large") {
  Matrix m(2, 2);
  m << Complex(1, 0), Complex(2, 1e-14), Complex(2, 0), Complex(3, 0);
  HermMatrix h(m);
  CHECK(max_abs(h.mat() - h.mat().adjoint().eval()) == 0.0);

  Matrix bad(2, 2);
  bad << Complex(1, 0), Complex(2, 0), Complex(5, 0), Complex(3, 0);
  CHECK_THROWS_AS(HermMatrix{bad}, InvalidInputError);

  Matrix nonsquare(2, 3);
  nonsquare.setZero();
  CHECK_THROWS_AS(HermMatrix{nonsquare}, InvalidInputError);

  Matrix nan_mat = Matrix::Zero(2, 2);
  nan_mat(0, 0) = Complex(std::nan(""), 0);
  CHECK_THROWS_AS(HermMatrix{nan_mat}, InvalidInputError);

  Matrix inf_rect(1, 2);
  inf_rect << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(RectMatrix{inf_rect}, InvalidInputError);
}

TEST_CASE("spectral norm: diagonal and identity") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 3.0;
  m(1, 1) = -4.0;
  CHECK(spectral_norm(HermMatrix(m)) == doctest::Approx(4.0).epsilon(1e-14));
  for (Index d : {1, 2, 5}) {
    CHECK(spectral_norm(HermMatrix::identity(d)) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("spectral norm matches shifted power-iteration oracle on random 6x6") {
  SplitMix64 rng(11);
  for (int rep = 0; rep < 12; ++rep) {
    HermMatrix h = random_herm(6, rng);
    const double ours = spectral_norm(h);
    const double oracle = oracles::power_iteration_norm(h.mat());
    CHECK(std::abs(ours - oracle) <= 1e-9 * std::max(1.0, oracle));
  }
}

TEST_CASE("hermitian dilation") {
  SUBCASE("1x1") {
    Matrix a(1, 1);
    a << 1.0;
    HermMatrix dil = hermitian_dilation(RectMatrix(a));
    Matrix expect(2, 2);
    expect << 0, 1, 1, 0;
    CHECK(max_abs(dil.mat() - expect) == 0.0);
    CHECK(spectral_norm(dil) == doctest::Approx(1.0));
  }
  SUBCASE("1x2 row") {
    Matrix a(1, 2);
    a << 1.0, 1.0;
    CHECK(spectral_norm(RectMatrix(a)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(spectral_norm(hermitian_dilation(RectMatrix(a))) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("norm preservation vs SVD oracle, 100 random 3x5") {
    SplitMix64 rng(12);
    for (int rep = 0; rep < 100; ++rep) {
      RectMatrix a = random_rect(3, 5, rng);
      CHECK(std::abs(spectral_norm(hermitian_dilation(a)) - oracles::svd_sigma_max(a.mat())) <=
            1e-10 * std::max(1.0, oracles::svd_sigma_max(a.mat())));
    }
  }
  SUBCASE("square is block diagonal AA*, A*A") {
    SplitMix64 rng(13);
    RectMatrix a = random_rect(2, 3, rng);
    Matrix sq = hermitian_dilation(a).mat() * hermitian_dilation(a).mat();
    CHECK(max_abs(sq.block(0, 0, 2, 2) - a.mat() * a.mat().adjoint()) < 1e-14);
    CHECK(max_abs(sq.block(2, 2, 3, 3) - a.mat().adjoint() * a.mat()) < 1e-14);
    CHECK(max_abs(sq.block(0, 2, 2, 3)) < 1e-14);
  }
}

TEST_CASE("assemble_block_G") {
  SUBCASE("n=2 with equal off-diagonal blocks") {
    SplitMix64 rng(14);
    HermMatrix a = random_herm(2, rng);
    std::vector<HermMatrix> blocks = {HermMatrix::zero(2), a, a, HermMatrix::zero(2)};
    ChaosCoefficients coeffs(2, 2, blocks);
    BlockHermMatrix g = assemble_block_G(coeffs);
    CHECK(max_abs(Matrix(g.block(0, 1)) - a.mat()) == 0.0);
    CHECK(max_abs(Matrix(g.block(0, 0))) == 0.0);
    Matrix gg = g.flat() * g.flat().adjoint();
    Matrix a2 = a.mat() * a.mat();
    CHECK(max_abs(gg.block(0, 0, 2, 2) - a2) < 1e-13);
    CHECK(max_abs(gg.block(2, 2, 2, 2) - a2) < 1e-13);
    CHECK(max_abs(gg.block(0, 2, 2, 2)) < 1e-13);
  }
  SUBCASE("example 1 diagonal blocks: (n-1) a_i a_i^T + sum_{j != i} a_j a_j^T") {
    const int n = 4;
    ExampleInstance inst = build_example1(n, n);
    BlockHermMatrix g = assemble_block_G(*inst.coeffs);
    Matrix gg = g.flat() * g.flat().adjoint();
    for (int i = 0; i < n; ++i) {
      Matrix expect = Matrix::Zero(n, n);
      expect(i, i) = static_cast<double>(n - 1);
      for (int j = 0; j < n; ++j) {
        if (j != i) expect(j, j) += 1.0;
      }
      CHECK(max_abs(gg.block(static_cast<Index>(i) * n, static_cast<Index>(i) * n, n, n) - expect) <
            1e-12);
    }
  }
  SUBCASE("example 2 off-diagonal blocks vanish") {
    ExampleInstance inst = build_example2(4, 4);
    BlockHermMatrix g = assemble_block_G(*inst.coeffs);
    Matrix gg = g.flat() * g.flat().adjoint();
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        CHECK(max_abs(gg.block(static_cast<Index>(i) * 4, static_cast<Index>(j) * 4, 4, 4)) < 1e-12);
      }
    }
  }
  SUBCASE("nonzero diagonal block rejected") {
    std::vector<HermMatrix> blocks(4, HermMatrix::identity(2));
    CHECK_THROWS_AS(ChaosCoefficients(2, 2, blocks), InvalidInputError);
  }
}

TEST_CASE("variance proxies") {
  SUBCASE("example 1: sum = 2(n-1) = 6, gg >= (n-2)n = 8") {
    VarianceProxies vp = variance_proxies(*build_example1(4, 4).coeffs);
    CHECK(vp.sum_sq_norm == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(vp.gg_star_norm >= 8.0 - 1e-9);
  }
  SUBCASE("example .2: (1, 2, n)") {
    VarianceProxies vp = variance_proxies(*build_example2(4, 4).coeffs);
    CHECK(vp.gg_star_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vp.sum_sq_norm == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(vp.row_sum_total == doctest::Approx(4.0).epsilon(1e-12));
  }
  SUBCASE("all-zero coefficients") {
    std::vector<HermMatrix> blocks(9, HermMatrix::zero(2));
    VarianceProxies vp = variance_proxies(ChaosCoefficients(3, 2, blocks));
    CHECK(vp.gg_star_norm == 0.0);
    CHECK(vp.sum_sq_norm == 0.0);
    CHECK(vp.row_sum_total == 0.0);
  }
  SUBCASE("invariants on random instances") {
    SplitMix64 rng(15);
    for (int rep = 0; rep < 25; ++rep) {
      const int n = 2 + static_cast<int>(rng.next() % 3);
      const Index d = 1 + static_cast<Index>(rng.next() % 3);
      ChaosCoefficients a = random_chaos(n, d, rng, rep % 2 == 0);
      VarianceProxies vp = variance_proxies(a);
      CHECK(vp.gg_star_norm <= vp.row_sum_total * (1.0 + 1e-12) + 1e-12);
      double max_row = 0.0, total = 0.0;
      for (double r : vp.row_sq_norms) {
        max_row = std::max(max_row, r);
        total += r;
      }
      CHECK(max_row <= vp.sum_sq_norm * (1.0 + 1e-12));
      CHECK(total == doctest::Approx(vp.row_sum_total));

      // trace(G G*) == trace(sum of squares), via the column blocks.
      BlockHermMatrix g = assemble_block_G(a);
      Matrix gg = g.flat() * g.flat().adjoint();
      Matrix sq = Matrix::Zero(d, d);
      for (int i1 = 0; i1 < n; ++i1) {
        for (int i2 = 0; i2 < n; ++i2) {
          if (i1 != i2) sq += a.at(i1, i2) * a.at(i1, i2);
        }
      }
      CHECK(std::abs(gg.trace().real() - sq.trace().real()) <=
            1e-9 * std::max(1.0, std::abs(sq.trace().real())));
    }
  }
}

TEST_CASE("PSD block matrix norm bound, spectral and nuclear") {
  SplitMix64 rng(16);
  for (int rep = 0; rep < 20; ++rep) {
    const Index d1 = 1 + static_cast<Index>(rng.next() % 3);
    const Index d2 = 1 + static_cast<Index>(rng.next() % 3);
    HermMatrix m = random_psd(d1 + d2, rng);
    Matrix a = m.mat().block(0, 0, d1, d1);
    Matrix b = m.mat().block(d1, d1, d2, d2);
    CHECK(spectral_norm(m) <= spectral_norm_raw(a) + spectral_norm_raw(b) + 1e-10);
    CHECK(nuclear_norm(m.mat()) <= nuclear_norm(a) + nuclear_norm(b) + 1e-10);
  }
}

TEST_CASE("matrix text format round trip") {
  SplitMix64 rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    const Index rows = 1 + static_cast<Index>(rng.next() % 4);
    const Index cols = 1 + static_cast<Index>(rng.next() % 4);
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) {
        // Mix pure-real, pure-imaginary and generic entries.
        const int kind = static_cast<int>(rng.next() % 3);
        const double re = kind == 1 ? 0.0 : rng.gaussian() * 1e3;
        const double im = kind == 0 ? 0.0 : rng.gaussian() * 1e-3;
        m(r, c) = Complex(re, im);
      }
    }
    std::ostringstream os;
    write_matrix(os, m);
    std::istringstream is(os.str());
    Matrix back = read_matrix(is);
    REQUIRE(back.rows() == rows);
    REQUIRE(back.cols() == cols);
    CHECK(max_abs(back - m) == 0.0);  // exact: 17 significant digits
  }
}

TEST_CASE("coefficient directory round trip") {
  SplitMix64 rng(18);
  ChaosCoefficients a = random_chaos(3, 2, rng, false);
  const std::string dir = "io_coeffs_test_dir";
  export_coefficients(a, dir);
  ChaosCoefficients back = import_coefficients(dir);
  REQUIRE(back.n() == 3);
  REQUIRE(back.d() == 2);
  for (int i1 = 0; i1 < 3; ++i1) {
    for (int i2 = 0; i2 < 3; ++i2) {
      if (i1 != i2) CHECK(max_abs(back.at(i1, i2) - a.at(i1, i2)) == 0.0);
    }
  }
  CHECK_THROWS_AS(import_coefficients("no_such_dir_here"), IoError);
}
