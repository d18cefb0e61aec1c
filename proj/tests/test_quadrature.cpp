// Corrected-rule assembly tests.  The sharpest check is the finite-spacing
// exactness identity: with spacing-matched weights the rule must reproduce
// the closed-form regularized moments to round-off, which exercises the
// stencil groups, signs, scalings, and both trapezoidal paths end to end.

#include "singquad/quadrature.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "singquad/refint.hpp"

using singquad::Integrand;
using singquad::Kernel;
using singquad::PrecisionMode;
using singquad::QuadratureConfig;
using singquad::WeightTable;
using singquad::XReal;

namespace {

int digits_agreeing(const XReal& a, const XReal& b) {
  XReal diff = abs(a - b);
  if (diff.is_zero()) return 10000;
  XReal scale = abs(b);
  if (scale.is_zero()) scale = abs(a);
  return static_cast<int>(-(log(diff / scale) / log(XReal(10))).to_double());
}

// phi = exp(-|x|^k) * x1^px * x2^py with both precision paths
Integrand monomial_bump(int k, int px, int py) {
  Integrand f;
  f.name = "monomial-bump";
  f.support_radius =
      singquad::truncation_radius(k, singquad::working_digits()).to_double();
  f.eval_d = [k, px, py](double x1, double x2) {
    return singquad::regularizer_g(k, x1, x2) * std::pow(x1, px) * std::pow(x2, py);
  };
  f.eval_x = [k, px, py](const XReal& x1, const XReal& x2) {
    return singquad::regularizer_g(k, x1, x2) * pow(x1, static_cast<long>(px)) *
           pow(x2, static_cast<long>(py));
  };
  return f;
}

}  // namespace

TEST_CASE("empty table reduces to the bare punctured rule") {
  auto phi = singquad::builtin_integrand("builtin:on-test");
  XReal alpha(1.5);
  QuadratureConfig cfg;
  cfg.h = 0.25;

  auto f = [&](double x1, double x2) {
    return phi.eval_d(x1, x2) * singquad::kernel_eval(Kernel::on_diag_x1, 1.5, x1, x2);
  };
  double bare = singquad::punctured_trapezoid(f, cfg.h, 1.0);

  WeightTable empty = singquad::bare_table(Kernel::on_diag_x1, alpha);
  XReal got = singquad::corrected_quadrature(phi, empty, cfg);
  CHECK(got.to_double() == Catch::Approx(bare).epsilon(1e-15));
}

TEST_CASE("spacing-matched weights integrate regularized monomials exactly") {
  QuadratureConfig cfg;
  cfg.mode = PrecisionMode::extended;
  cfg.h = 1.0 / 16;
  int d = singquad::working_digits();

  // on-diagonal: xi = (0,1) lies in the p = 1 stencil's moment span
  {
    cfg.radius = singquad::truncation_radius(6, d).to_double();
    XReal alpha("0.5");
    XReal got = singquad::corrected_quadrature_hweights(monomial_bump(6, 0, 2),
                                                        Kernel::on_diag_x1, 1, alpha, 6, cfg);
    XReal want = singquad::moment_integral(Kernel::on_diag_x1, {0, 1}, alpha, 6);
    CHECK(digits_agreeing(got, want) >= d - 12);
  }
  // off-diagonal: xi = (1,1) in the p = 2 stencil, phi-monomial x1 x2
  {
    cfg.radius = singquad::truncation_radius(8, d).to_double();
    XReal alpha("1.5");
    XReal got = singquad::corrected_quadrature_hweights(monomial_bump(8, 1, 1),
                                                        Kernel::off_diag, 2, alpha, 8, cfg);
    XReal want = singquad::moment_integral(Kernel::off_diag, {1, 1}, alpha, 8);
    CHECK(digits_agreeing(got, want) >= d - 12);
  }

  QuadratureConfig dbl;
  dbl.mode = PrecisionMode::double_prec;
  CHECK_THROWS_AS(singquad::corrected_quadrature_hweights(monomial_bump(6, 0, 2),
                                                          Kernel::on_diag_x1, 1,
                                                          XReal(0.5), 6, dbl),
                  singquad::DomainError);
}

TEST_CASE("double and extended paths agree to double accuracy") {
  auto table = singquad::solve_weights(Kernel::on_diag_x1, 1, XReal(0.5));
  auto phi = singquad::builtin_integrand("builtin:on-test");
  QuadratureConfig cfg;
  cfg.h = 1.0 / 32;
  XReal vd = singquad::corrected_quadrature(phi, table, cfg);
  cfg.mode = PrecisionMode::extended;
  XReal vx = singquad::corrected_quadrature(phi, table, cfg);
  CHECK(digits_agreeing(vd, vx) >= 14);
}

TEST_CASE("coarse-to-fine error shrinks against the reference integral") {
  XReal alpha("1.5");
  auto phi = singquad::builtin_integrand("builtin:on-test");
  auto table = singquad::solve_weights(Kernel::on_diag_x1, 0, alpha);
  XReal ref = singquad::reference_integral(phi, Kernel::on_diag_x1, alpha, 16).value;

  QuadratureConfig cfg;
  cfg.h = 1.0 / 8;
  XReal err_coarse = abs(singquad::corrected_quadrature(phi, table, cfg) - ref);
  cfg.h = 1.0 / 32;
  XReal err_fine = abs(singquad::corrected_quadrature(phi, table, cfg) - ref);
  CHECK(err_fine < err_coarse);
  // order 2p+4-alpha = 2.5: two halvings shrink the error about 2^5 = 32x
  double ratio = (err_coarse / err_fine).to_double();
  CHECK(ratio > 16.0);
  CHECK(ratio < 64.0);
}

TEST_CASE("off-diagonal rule annihilates symmetric integrands") {
  auto g6 = singquad::builtin_integrand("builtin:g6");
  auto table = singquad::solve_weights(Kernel::off_diag, 2, XReal(0.5));
  QuadratureConfig cfg;
  cfg.h = 1.0 / 16;
  XReal v = singquad::corrected_quadrature(g6, table, cfg);
  CHECK(std::abs(v.to_double()) <= 1e-13);
}

TEST_CASE("integral triple wiring") {
  auto phi = singquad::builtin_integrand("builtin:on-test");
  XReal alpha("1.5");
  auto t11 = singquad::solve_weights(Kernel::on_diag_x1, 0, alpha);
  auto t22 = singquad::solve_weights(Kernel::on_diag_x2, 0, alpha);
  auto t12 = singquad::bare_table(Kernel::off_diag, alpha);
  QuadratureConfig cfg;
  cfg.h = 1.0 / 16;
  auto triple = singquad::integral_triple(phi, t11, t22, t12, cfg);
  // the test integrand is symmetric under x1 <-> x2, so the two diagonal
  // components coincide
  CHECK(digits_agreeing(triple.i11, triple.i22) >= 13);
  CHECK_THROWS_AS(singquad::integral_triple(phi, t12, t22, t11, cfg),
                  singquad::DomainError);
}

TEST_CASE("quadrature domain validation") {
  auto phi = singquad::builtin_integrand("builtin:on-test");
  auto table = singquad::bare_table(Kernel::on_diag_x1, XReal(0.5));
  QuadratureConfig cfg;
  cfg.h = 0;
  CHECK_THROWS_AS(singquad::corrected_quadrature(phi, table, cfg), singquad::DomainError);
  cfg.h = 0.25;
  Integrand no_d;
  no_d.eval_x = [](const XReal&, const XReal&) { return XReal(1); };
  no_d.support_radius = 1.0;
  CHECK_THROWS_AS(singquad::corrected_quadrature(no_d, table, cfg), singquad::DomainError);
  cfg.mode = PrecisionMode::extended;
  Integrand no_x;
  no_x.eval_d = [](double, double) { return 1.0; };
  no_x.support_radius = 1.0;
  CHECK_THROWS_AS(singquad::corrected_quadrature(no_x, table, cfg), singquad::DomainError);
  CHECK_THROWS_AS(singquad::parse_mode("quad"), singquad::DomainError);
  CHECK(singquad::parse_mode("double") == PrecisionMode::double_prec);
  CHECK(singquad::parse_mode("extended") == PrecisionMode::extended);
}
