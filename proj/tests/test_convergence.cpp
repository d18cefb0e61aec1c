// Slope-fitting and study-driver tests.  The fitter is checked against
// synthetic data with known exact slopes (including floor-excluded rows and
// a pre-asymptotic outlier); the driver is checked on real kernels where the
// measured order must land on the known convergence rate.

#include "singquad/convergence.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <string>
#include <vector>

using singquad::ConvergenceOptions;
using singquad::ConvergenceReport;
using singquad::ConvergenceSeries;
using singquad::fit_slope;
using singquad::Kernel;
using singquad::SlopeFit;
using singquad::XReal;

namespace {

std::vector<double> halving_ladder(int first, int last) {
  std::vector<double> hs;
  for (int r = first; r <= last; ++r) hs.push_back(std::ldexp(1.0, -r));
  return hs;
}

}  // namespace

TEST_CASE("slope fit recovers an exact power law") {
  auto hs = halving_ladder(3, 7);
  std::vector<double> errs;
  for (double h : hs) errs.push_back(3.0 * std::pow(h, 2.5));
  SlopeFit fit = fit_slope(hs, errs, 1e-12);
  CHECK(fit.slope == Catch::Approx(2.5).margin(1e-10));
  CHECK(fit.intercept == Catch::Approx(std::log(3.0)).margin(1e-9));
  CHECK(fit.points_used == 5);
  CHECK_FALSE(fit.dropped_coarsest);
}

TEST_CASE("rows at the round-off floor are excluded from the fit") {
  auto hs = halving_ladder(3, 9);
  std::vector<double> errs;
  for (double h : hs) errs.push_back(std::pow(h, 4.0));
  // the three finest rows saturate at a floor that would flatten the fit
  errs[4] = errs[5] = errs[6] = 2e-13;
  SlopeFit fit = fit_slope(hs, errs, 1e-12);
  CHECK(fit.points_used == 4);
  CHECK(fit.slope == Catch::Approx(4.0).margin(1e-10));

  std::vector<double> flat(hs.size(), 1e-14);
  CHECK_THROWS_AS(fit_slope(hs, flat, 1e-12), singquad::NonConvergenceError);
  CHECK_THROWS_AS(fit_slope(hs, {1.0}, 1e-12), singquad::DomainError);
}

TEST_CASE("a far-off coarsest point is dropped as pre-asymptotic") {
  auto hs = halving_ladder(3, 8);
  std::vector<double> errs;
  for (double h : hs) errs.push_back(std::pow(h, 3.0));
  for (std::size_t i = 0; i < errs.size(); ++i) {
    errs[i] *= 1.0 + 1e-6 * static_cast<double>(i % 2);  // tiny honest scatter
  }
  errs[0] *= 150.0;  // transient at the coarsest spacing
  SlopeFit fit = fit_slope(hs, errs, 1e-15);
  CHECK(fit.dropped_coarsest);
  CHECK(fit.points_used == 5);
  CHECK(fit.slope == Catch::Approx(3.0).margin(1e-4));
}

TEST_CASE("study driver measures the known convergence orders") {
  ConvergenceOptions opts;
  opts.reference_digits = 14;

  SECTION("on-diagonal, p = 0, alpha = 1.5") {
    auto phi = singquad::builtin_integrand("builtin:on-test");
    auto rep = singquad::run_convergence_study(phi, Kernel::on_diag_x1, XReal("1.5"), {0}, opts);
    REQUIRE(rep.series.size() == 1);
    CHECK(rep.series[0].nominal_order == Catch::Approx(2.5));
    CHECK(rep.series[0].fit.slope == Catch::Approx(2.5).margin(0.2));
    CHECK(rep.kernel == "on_diag_x1");
    CHECK(rep.mode == "double");
  }
  SECTION("off-diagonal, p = 1 runs as the bare punctured rule") {
    auto phi = singquad::builtin_integrand("builtin:off-test");
    auto rep = singquad::run_convergence_study(phi, Kernel::off_diag, XReal("0.5"), {1}, opts);
    REQUIRE(rep.series.size() == 1);
    CHECK(rep.series[0].nominal_order == Catch::Approx(3.5));
    CHECK(rep.series[0].fit.slope == Catch::Approx(3.5).margin(0.2));
  }
}

TEST_CASE("csv serialization is stable") {
  ConvergenceReport rep;
  rep.kernel = "off_diag";
  rep.alpha = "0.5";
  rep.integrand = "builtin:off-test";
  rep.mode = "double";
  rep.floor_threshold = 0.25;
  rep.reference = "1.25";
  ConvergenceSeries s;
  s.p = 2;
  s.nominal_order = 5.5;
  s.hs = {0.25, 0.125};
  s.errors = {0.5, 0.0625};
  s.fit.slope = 3.5;
  s.fit.points_used = 2;
  rep.series = {s};

  std::string expected =
      "# schema: singquad/convergence-report-v1\n"
      "# kernel: off_diag\n"
      "# alpha: 0.5\n"
      "# integrand: builtin:off-test\n"
      "# mode: double\n"
      "# floor_threshold: 0.25\n"
      "# reference: 1.25\n"
      "p,h,error,slope_fitted\n"
      "2,0.25,0.5,3.5\n"
      "2,0.125,0.0625,3.5\n";
  CHECK(singquad::convergence_csv(rep) == expected);
}
