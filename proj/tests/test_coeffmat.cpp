// Exact coefficient-matrix contracts: frozen small matrices, the block and
// factorization structure theorems in integer/rational arithmetic, and the
// determinant product formulas at random nodes.

#include "singquad/coeffmat.hpp"

#include <catch2/catch_amalgamated.hpp>

using singquad::BigInt;
using singquad::Kernel;
using singquad::XReal;

TEST_CASE("order-1 on-diagonal matrix is the hand-derived 3x3") {
  auto k = singquad::build_coeff_matrix(Kernel::on_diag_x1, 1);
  REQUIRE(k.n == 3);
  // rows (0,0),(0,1),(1,0) x groups of the same indices
  long want[3][3] = {{1, 2, 2}, {0, 2, 0}, {0, 0, 2}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(k.at(i, j) == want[i][j]);
  CHECK(singquad::exact_determinant(k) == 4);
}

TEST_CASE("order-3 off-diagonal matrix is the hand-derived 2x2") {
  auto k = singquad::build_coeff_matrix(Kernel::off_diag, 3);
  REQUIRE(k.n == 2);
  CHECK(k.at(0, 0) == 4);
  CHECK(k.at(0, 1) == 16);
  CHECK(k.at(1, 0) == 4);
  CHECK(k.at(1, 1) == 40);
  CHECK(singquad::exact_determinant(k) == 96);

  auto k2 = singquad::build_coeff_matrix(Kernel::off_diag, 2);
  REQUIRE(k2.n == 1);
  CHECK(k2.at(0, 0) == 4);
}

TEST_CASE("on-diagonal axis choice does not change the coefficient matrix") {
  // Both on-diagonal kernels share stencil and groups; K depends on neither
  // the axis nor alpha.
  auto a = singquad::build_coeff_matrix(Kernel::on_diag_x1, 4);
  auto b = singquad::build_coeff_matrix(Kernel::on_diag_x2, 4);
  REQUIRE(a.n == b.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) CHECK(a.at(i, j) == b.at(i, j));
}

TEST_CASE("block structure holds exactly for p up to 7") {
  for (int p = 1; p <= 7; ++p) {
    auto rep = singquad::block_structure(p);
    INFO("p = " << p);
    CHECK(rep.lower_left_zero);
    CHECK(rep.corner_unit);
    CHECK(rep.first_row_doubles);
    CHECK(rep.vandermonde_blocks);
    CHECK(rep.d_is_4e);
    CHECK(rep.det_product);
    CHECK(rep.ok());
    CHECK(rep.split == static_cast<std::size_t>(2 * p + 1));
  }
}

TEST_CASE("off-diagonal K factors exactly as E times diagonal H") {
  for (int p = 2; p <= 8; ++p) {
    auto f = singquad::off_diag_factorization(p);
    INFO("p = " << p);
    CHECK(f.exact_match);
    for (const auto& h : f.h) CHECK(h > 0);
  }

  // Hand values at p = 3: E = [[2,8],[2,20]], H = diag(2, 2).
  auto f3 = singquad::off_diag_factorization(3);
  REQUIRE(f3.n == 2);
  CHECK(f3.e[0] == 2);
  CHECK(f3.e[1] == 8);
  CHECK(f3.e[2] == 2);
  CHECK(f3.e[3] == 20);
  CHECK(f3.h[0] == singquad::BigRat(2));
  CHECK(f3.h[1] == singquad::BigRat(2));
}

TEST_CASE("determinant product formulas: constant nonzero ratios") {
  // Hand-verified constants: the on-diagonal interior determinant divided by
  // its node product is 1 at p = 2 and 3; the off-diagonal one is 2 at p = 3
  // (det T = 2 x1^3 x2 (x2 - x1)).
  auto on2 = singquad::det_factorization_check(Kernel::on_diag_x1, 2, 5, 101);
  CHECK(on2.constant_ratio);
  CHECK(on2.nonzero);
  CHECK(on2.ratio == "1");

  auto on3 = singquad::det_factorization_check(Kernel::on_diag_x1, 3, 5, 102);
  CHECK(on3.constant_ratio);
  CHECK(on3.nonzero);
  CHECK(on3.ratio == "1");

  auto off3 = singquad::det_factorization_check(Kernel::off_diag, 3, 5, 103);
  CHECK(off3.constant_ratio);
  CHECK(off3.nonzero);
  CHECK(off3.ratio == "2");

  for (int p = 2; p <= 6; ++p) {
    for (Kernel kk : {Kernel::on_diag_x1, Kernel::off_diag}) {
      auto r = singquad::det_factorization_check(kk, p, 5, 1000 + p);
      INFO("p = " << p << " kernel = " << singquad::kernel_name(kk));
      CHECK(r.constant_ratio);
      CHECK(r.nonzero);
    }
  }

  // Different seeds land on the same constant.
  auto a = singquad::det_factorization_check(Kernel::off_diag, 5, 4, 7);
  auto b = singquad::det_factorization_check(Kernel::off_diag, 5, 4, 8);
  CHECK(a.ratio == b.ratio);
}

TEST_CASE("nonsingularity certificates") {
  for (const auto& c : singquad::certify_nonsingular(Kernel::on_diag_x1, 6)) {
    INFO("p = " << c.p);
    CHECK(c.nonzero);
  }
  for (const auto& c : singquad::certify_nonsingular(Kernel::off_diag, 8)) {
    INFO("p = " << c.p);
    CHECK(c.nonzero);
  }
}

TEST_CASE("floating determinant of K agrees with the exact one") {
  for (auto [kernel, pmax] : {std::pair{Kernel::on_diag_x1, 4}, {Kernel::off_diag, 6}}) {
    int pmin = (kernel == Kernel::off_diag) ? 2 : 0;
    for (int p = pmin; p <= pmax; ++p) {
      auto k = singquad::build_coeff_matrix(kernel, p);
      BigInt want = singquad::exact_determinant(k);
      XReal got = singquad::determinant(singquad::to_xmatrix(k));
      XReal wx(want.get_str());
      XReal rel = abs(got - wx) / abs(wx);
      CHECK(rel < pow(XReal(10), -static_cast<long>(singquad::working_digits() - 10)));
    }
  }
}

TEST_CASE("condition estimates are finite and at least one") {
  for (int p : {1, 2, 4}) {
    XReal c = singquad::coeff_condition_estimate(Kernel::on_diag_x1, p);
    CHECK(c.is_finite());
    CHECK(c >= XReal(1));
  }
  XReal c = singquad::coeff_condition_estimate(Kernel::off_diag, 4);
  CHECK(c.is_finite());
  CHECK(c >= XReal(1));
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(singquad::block_structure(0), singquad::DomainError);
  CHECK_THROWS_AS(singquad::det_factorization_check(Kernel::off_diag, 1, 5, 1),
                  singquad::DomainError);
  CHECK_THROWS_AS(singquad::det_factorization_check(Kernel::off_diag, 4, 0, 1),
                  singquad::DomainError);
}
