// Kernel and moment contracts.  The closed-form regularized moments are
// checked against a numeric oracle that integrates in polar coordinates with
// composite rules -- a route that shares no code (and no gamma function)
// with the implementation.

#include "singquad/kernels.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using singquad::Kernel;
using singquad::MultiIndex;
using singquad::XReal;

namespace {

int digits_agreeing(const XReal& a, const XReal& b) {
  XReal diff = abs(a - b);
  if (diff.is_zero()) return 10000;
  XReal scale = abs(b);
  if (scale.is_zero()) scale = abs(a);
  return static_cast<int>(-(log(diff / scale) / log(XReal(10))).to_double());
}

// Numeric oracle for the regularized moments, in double precision:
//   integral of exp(-|x|^k) s(x) x^(2 xi) dx
//     = [angular factor] * [radial factor],
//   angular = trapezoid over [0, 2pi) of cos^A sin^B   (spectral: periodic)
//   radial  = Simpson over v in [0, Vmax] after r = v^2 (integrand smooth)
// with A, B, and the radial power depending on the kernel.
double oracle_moment(Kernel kernel, int xa, int xb, double alpha, int k) {
  int A, B;
  double radial_power;  // power of r in the radial integrand
  if (kernel == Kernel::on_diag_x1) {
    A = 2 * xa + 2; B = 2 * xb;
    radial_power = 2.0 * (xa + xb) + 1.0 - alpha;
  } else if (kernel == Kernel::on_diag_x2) {
    A = 2 * xa; B = 2 * xb + 2;
    radial_power = 2.0 * (xa + xb) + 1.0 - alpha;
  } else {
    A = 2 * xa; B = 2 * xb;
    radial_power = 2.0 * (xa + xb) - 1.0 - alpha;
  }

  const int n_theta = 4096;
  double angular = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    double th = 2.0 * M_PI * i / n_theta;
    angular += std::pow(std::cos(th), A) * std::pow(std::sin(th), B);
  }
  angular *= 2.0 * M_PI / n_theta;

  // r = v^2: integrand 2 * exp(-v^(2k)) * v^e with e = 2*radial_power + 1,
  // a nonnegative integer for the half-integer alphas exercised here (and
  // hence smooth; e = 0 makes the v = 0 endpoint value 2, not 0).
  double vmax = std::pow(50.0, 1.0 / (2.0 * k));
  const int n = 40000;  // even
  double h = vmax / n;
  double e = 2.0 * radial_power + 1.0;
  double radial = 0.0;
  for (int i = 0; i <= n; ++i) {
    double v = i * h;
    double val;
    if (i == 0)
      val = (e == 0.0) ? 2.0 : 0.0;
    else
      val = 2.0 * std::exp(-std::pow(v, 2.0 * k)) * std::pow(v, e);
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    radial += w * val;
  }
  radial *= h / 3.0;

  return angular * radial;
}

}  // namespace

TEST_CASE("kernel_eval matches hand values and respects symmetry") {
  // x = (1,0): |x| = 1, so on_diag_x1 = 1, on_diag_x2 = 0, off_diag = 0.
  CHECK(singquad::kernel_eval(Kernel::on_diag_x1, 0.5, 1.0, 0.0) == 1.0);
  CHECK(singquad::kernel_eval(Kernel::on_diag_x2, 0.5, 1.0, 0.0) == 0.0);
  CHECK(singquad::kernel_eval(Kernel::off_diag, 0.5, 1.0, 0.0) == 0.0);

  // x = (1,1), alpha = 3/2: x1*x2/|x|^(7/2) = 2^(-7/4).
  CHECK(singquad::kernel_eval(Kernel::off_diag, 1.5, 1.0, 1.0) ==
        Catch::Approx(std::pow(2.0, -1.75)).epsilon(1e-14));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int t = 0; t < 50; ++t) {
    double x = dist(rng), y = dist(rng);
    if (x == 0.0 && y == 0.0) continue;
    for (double alpha : {0.5, 1.0, 1.5}) {
      // even in each coordinate on-diagonal
      CHECK(singquad::kernel_eval(Kernel::on_diag_x1, alpha, x, y) ==
            Catch::Approx(singquad::kernel_eval(Kernel::on_diag_x1, alpha, -x, y)));
      // axis swap maps the two on-diagonal kernels onto each other
      CHECK(singquad::kernel_eval(Kernel::on_diag_x2, alpha, x, y) ==
            Catch::Approx(singquad::kernel_eval(Kernel::on_diag_x1, alpha, y, x)));
      // odd under single reflection off-diagonal
      CHECK(singquad::kernel_eval(Kernel::off_diag, alpha, x, y) ==
            Catch::Approx(-singquad::kernel_eval(Kernel::off_diag, alpha, -x, y)));
    }
  }
}

TEST_CASE("kernel_eval double and extended paths agree") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int t = 0; t < 30; ++t) {
    double x = dist(rng), y = dist(rng);
    if (std::abs(x) + std::abs(y) < 1e-6) continue;
    XReal vx = singquad::kernel_eval(Kernel::on_diag_x1, XReal(0.5), XReal(x), XReal(y));
    double vd = singquad::kernel_eval(Kernel::on_diag_x1, 0.5, x, y);
    CHECK(vx.to_double() == Catch::Approx(vd).epsilon(1e-14));
  }
  CHECK_THROWS_AS(singquad::kernel_eval(Kernel::off_diag, XReal(0.5), XReal(0), XReal(0)),
                  singquad::DomainError);
}

TEST_CASE("regularizer is exp(-|x|^k) with even-k validation") {
  CHECK(singquad::regularizer_g(6, 0.0, 0.0) == 1.0);
  // |x|^6 at (1,1): (sqrt 2)^6 = 8
  CHECK(singquad::regularizer_g(6, 1.0, 1.0) == Catch::Approx(std::exp(-8.0)).epsilon(1e-15));
  CHECK(singquad::regularizer_g(8, 0.5, 0.0) ==
        Catch::Approx(std::exp(-std::pow(0.5, 8))).epsilon(1e-15));
  CHECK_THROWS_AS(singquad::regularizer_g(5, 1.0, 0.0), singquad::DomainError);
  CHECK_THROWS_AS(singquad::regularizer_g(0, 1.0, 0.0), singquad::DomainError);

  XReal g = singquad::regularizer_g(6, XReal(1) / XReal(4), XReal(1) / XReal(8));
  CHECK(g.to_double() == Catch::Approx(singquad::regularizer_g(6, 0.25, 0.125)).epsilon(1e-15));
}

TEST_CASE("truncation radius pins the regularizer at the drop threshold") {
  for (int k : {2, 4, 6, 8}) {
    XReal r = singquad::truncation_radius(k, 50);
    XReal gk = exp(-pow(r, static_cast<long>(k)));
    // by construction exp(-R^k) = 10^-55
    CHECK(digits_agreeing(gk, XReal("1e-55")) >= 10);
  }
  // k = 6 at 50 digits: R = (55 ln 10)^(1/6), just above 2.24
  double r6 = singquad::truncation_radius(6, 50).to_double();
  CHECK(r6 == Catch::Approx(std::pow(55.0 * std::log(10.0), 1.0 / 6.0)).epsilon(1e-12));
}

TEST_CASE("moment closed form reduces to pi*Gamma(1/4)/6 at the base case") {
  // on_diag_x1, xi = (0,0), alpha = 1/2, k = 6:
  //   2 G(3/2) G(1/2) G(1/4) / (6 G(2)) = pi G(1/4) / 6.
  XReal got = singquad::moment_integral(Kernel::on_diag_x1, {0, 0}, XReal(0.5), 6);
  XReal want = XReal::pi() * singquad::gamma(XReal(0.25)) / XReal(6);
  CHECK(digits_agreeing(got, want) >= singquad::working_digits() - 5);
}

TEST_CASE("moment closed form matches the polar numeric oracle") {
  for (int k : {6, 8}) {
    for (double alpha : {0.5, 1.5}) {
      for (auto [xa, xb] : {std::pair{0, 0}, {1, 0}, {0, 1}, {2, 1}, {0, 3}}) {
        XReal got =
            singquad::moment_integral(Kernel::on_diag_x1, {xa, xb}, XReal(alpha), k);
        double want = oracle_moment(Kernel::on_diag_x1, xa, xb, alpha, k);
        CHECK(got.to_double() == Catch::Approx(want).epsilon(1e-10));

        XReal got2 =
            singquad::moment_integral(Kernel::on_diag_x2, {xa, xb}, XReal(alpha), k);
        double want2 = oracle_moment(Kernel::on_diag_x2, xa, xb, alpha, k);
        CHECK(got2.to_double() == Catch::Approx(want2).epsilon(1e-10));
      }
      for (auto [xa, xb] : {std::pair{1, 1}, {2, 1}, {3, 2}}) {
        XReal got = singquad::moment_integral(Kernel::off_diag, {xa, xb}, XReal(alpha), k);
        double want = oracle_moment(Kernel::off_diag, xa, xb, alpha, k);
        CHECK(got.to_double() == Catch::Approx(want).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("moment swap symmetry and domain checks") {
  XReal a = singquad::moment_integral(Kernel::on_diag_x2, {2, 1}, XReal(0.5), 6);
  XReal b = singquad::moment_integral(Kernel::on_diag_x1, {1, 2}, XReal(0.5), 6);
  CHECK(digits_agreeing(a, b) >= singquad::working_digits() - 5);

  CHECK_THROWS_AS(singquad::moment_integral(Kernel::off_diag, {0, 1}, XReal(0.5), 6),
                  singquad::DomainError);
  CHECK_THROWS_AS(singquad::moment_integral(Kernel::on_diag_x1, {0, 0}, XReal(2.5), 6),
                  singquad::DomainError);
  CHECK_THROWS_AS(singquad::moment_integral(Kernel::on_diag_x1, {0, 0}, XReal(0.5), 7),
                  singquad::DomainError);
}

TEST_CASE("fractional Laplacian constant: known values and positivity") {
  // C(2,1) = 2 G(3/2) / (pi |G(-1/2)|) = 2 (sqrt(pi)/2) / (pi 2 sqrt(pi)) = 1/(2 pi).
  XReal c21 = singquad::frac_laplacian_constant(2, XReal(1));
  XReal want21 = XReal(1) / (XReal(2) * XReal::pi());
  CHECK(digits_agreeing(c21, want21) >= singquad::working_digits() - 5);

  // C(3,1) = 2 G(2) / (pi^(3/2) |G(-1/2)|) = 2 / (pi^(3/2) 2 sqrt(pi)) = 1/pi^2.
  XReal c31 = singquad::frac_laplacian_constant(3, XReal(1));
  XReal want31 = XReal(1) / (XReal::pi() * XReal::pi());
  CHECK(digits_agreeing(c31, want31) >= singquad::working_digits() - 5);

  for (double alpha : {0.1, 0.5, 0.9, 1.1, 1.5, 1.9})
    CHECK(singquad::frac_laplacian_constant(2, XReal(alpha)) > XReal(0));

  CHECK_THROWS_AS(singquad::frac_laplacian_constant(2, XReal(0)), singquad::DomainError);
  CHECK_THROWS_AS(singquad::frac_laplacian_constant(2, XReal(2)), singquad::DomainError);
}

TEST_CASE("built-in integrands: values, support, and path consistency") {
  auto on = singquad::builtin_integrand("builtin:on-test");
  CHECK(on.eval_d(0.0, 0.0) == 1.0);
  CHECK(on.eval_d(1.0, 0.5) == 0.0);
  CHECK(on.eval_d(0.3, 1.0) == 0.0);
  CHECK(on.support_radius == 1.0);

  auto off = singquad::builtin_integrand("builtin:off-test");
  double m = std::pow((1 - 0.25) * (1 - 0.0625), 7);
  CHECK(off.eval_d(0.5, -0.25) ==
        Catch::Approx((1.5) * (0.75) * std::pow((1 - 0.25) * (1 - 0.0625), 7)).epsilon(1e-14));
  (void)m;

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.2, 1.2);
  for (const char* name : {"builtin:on-test", "builtin:off-test", "builtin:g6", "builtin:g8"}) {
    auto f = singquad::builtin_integrand(name);
    for (int t = 0; t < 25; ++t) {
      double x = dist(rng), y = dist(rng);
      double vd = f.eval_d(x, y);
      double vx = f.eval_x(XReal(x), XReal(y)).to_double();
      if (vd == 0.0)
        CHECK(vx == 0.0);
      else
        CHECK(vx == Catch::Approx(vd).epsilon(1e-13));
    }
  }

  auto zero = singquad::builtin_integrand("builtin:zero");
  CHECK(zero.eval_d(0.3, 0.4) == 0.0);
  CHECK(zero.eval_x(XReal(1), XReal(1)).is_zero());

  CHECK_THROWS_AS(singquad::builtin_integrand("builtin:nope"), singquad::DomainError);

  // regularizer integrands advertise the truncation radius as their support
  auto g6 = singquad::builtin_integrand("builtin:g6");
  CHECK(g6.support_radius ==
        Catch::Approx(singquad::truncation_radius(6, singquad::working_digits()).to_double()));
}
