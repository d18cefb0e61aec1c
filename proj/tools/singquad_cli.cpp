// Command-line driver for the corrected trapezoidal rules.
//
// Subcommands:
//   weights       solve for limiting correction weights, print/write a table
//   convergence   sweep spacings, measure errors, fit log-log slopes
//   verify-matrix certify the exact structure of the coefficient matrices
//   integrate     apply a stored weight table to a built-in integrand
//
// Exit codes: 0 success, 2 argument/domain error, 3 verification failure,
// 4 numerical non-convergence.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "singquad/singquad.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFail = 3;
constexpr int kExitNonConvergence = 4;

struct GlobalArgs {
  int working_digits = 50;
  bool serial = false;  // computation is always serial; accepted for scripts
};

void apply_globals(const GlobalArgs& g) {
  singquad::set_working_digits(g.working_digits);
}

void write_text_artifact(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw singquad::DomainError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw singquad::DomainError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// weights
// ---------------------------------------------------------------------------

struct WeightsArgs {
  std::string kernel;
  std::string alpha;
  int p = 0;
  double h_base = 1.0 / 32;
  int levels = 3;
  int k = 0;  // 0 -> per-kernel default
  int min_digits = 15;
  std::string out;
};

int run_weights(const GlobalArgs& g, const WeightsArgs& a) {
  apply_globals(g);
  singquad::Kernel kernel = singquad::parse_kernel(a.kernel);
  singquad::XReal alpha(a.alpha);
  singquad::WeightGenOptions opt;
  opt.h_base = a.h_base;
  opt.levels = a.levels;
  opt.k = a.k;
  singquad::WeightTable table = singquad::solve_weights(kernel, a.p, alpha, opt);

  std::cout << "kernel=" << singquad::kernel_name(kernel) << " alpha=" << a.alpha
            << " p=" << a.p << " k=" << table.k << "\n";
  int print_digits = table.digits > 0 ? table.digits : 6;
  for (const auto& e : table.entries) {
    std::cout << "omega[" << e.gamma.a << "," << e.gamma.b
              << "] = " << e.value.str(print_digits) << "\n";
  }
  std::cout << "digits_achieved=" << table.digits << "\n";
  if (!a.out.empty()) {
    singquad::save_table(a.out, table);
    std::cout << "wrote " << a.out << "\n";
  }
  if (table.digits < a.min_digits) {
    std::cerr << "error: achieved " << table.digits << " digits, below the required "
              << a.min_digits << " (try a smaller --h-base, more --levels, or more "
              << "--working-digits)\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// convergence
// ---------------------------------------------------------------------------

struct ConvergenceArgs {
  std::string kernel;
  std::string alpha;
  std::vector<int> ps;
  std::vector<double> hs;
  std::string phi;
  std::string mode = "double";
  double floor_threshold = 1e-12;
  int reference_digits = 16;
  int k = 0;
  std::string out;
};

int run_convergence(const GlobalArgs& g, const ConvergenceArgs& a) {
  apply_globals(g);
  singquad::Kernel kernel = singquad::parse_kernel(a.kernel);
  singquad::XReal alpha(a.alpha);

  std::vector<int> ps = a.ps;
  if (ps.empty()) ps = singquad::is_on_diag(kernel) ? std::vector<int>{0, 1, 2}
                                                    : std::vector<int>{1, 2, 3};
  std::string phi_name = a.phi;
  if (phi_name.empty()) {
    phi_name = singquad::is_on_diag(kernel) ? "builtin:on-test" : "builtin:off-test";
  }
  singquad::Integrand phi = singquad::builtin_integrand(phi_name);

  singquad::ConvergenceOptions opt;
  opt.hs = a.hs;
  opt.mode = singquad::parse_mode(a.mode);
  opt.floor_threshold = a.floor_threshold;
  opt.reference_digits = a.reference_digits;
  opt.table_options.k = a.k;

  singquad::ConvergenceReport rep = singquad::run_convergence_study(phi, kernel, alpha, ps, opt);
  std::string csv = singquad::convergence_csv(rep);

  if (a.out.empty()) {
    std::cout << csv;
  } else {
    write_text_artifact(a.out, csv);
    for (const auto& s : rep.series) {
      std::cout << "p=" << s.p << " slope=" << s.fit.slope
                << " nominal=" << s.nominal_order << " points_used=" << s.fit.points_used
                << (s.fit.dropped_coarsest ? " (coarsest dropped)" : "") << "\n";
    }
    std::cout << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify-matrix
// ---------------------------------------------------------------------------

struct VerifyMatrixArgs {
  std::string kernel;
  int p_max = 6;
  int trials = 3;
  std::uint64_t seed = 20240817;
  std::string out;
};

int run_verify_matrix(const GlobalArgs& g, const VerifyMatrixArgs& a) {
  apply_globals(g);
  singquad::Kernel kernel = singquad::parse_kernel(a.kernel);
  const bool on = singquad::is_on_diag(kernel);
  const int p_min = on ? 0 : 2;
  if (a.p_max < p_min) {
    throw singquad::DomainError("verify-matrix: --p-max below the smallest admissible order");
  }

  std::ostringstream rep;
  bool all_ok = true;
  auto certs = singquad::certify_nonsingular(kernel, a.p_max);
  for (const auto& c : certs) {
    bool line_ok = c.nonzero;
    rep << "p=" << c.p << " nonsingular=" << (c.nonzero ? "yes" : "NO");

    if (on && c.p >= 1) {
      auto bs = singquad::block_structure(c.p);
      rep << " block-structure=" << (bs.ok() ? "ok" : "FAIL");
      line_ok = line_ok && bs.ok();
    }
    if (!on) {
      auto f = singquad::off_diag_factorization(c.p);
      rep << " diagonal-factorization=" << (f.exact_match ? "ok" : "FAIL");
      line_ok = line_ok && f.exact_match;
    }
    if (c.p >= 2) {
      auto d = singquad::det_factorization_check(kernel, c.p, a.trials, a.seed);
      bool dok = d.constant_ratio && d.nonzero;
      rep << " factorization-ratio=" << (dok ? ("const " + d.ratio) : "FAIL");
      line_ok = line_ok && dok;
    }
    rep << "\n";
    all_ok = all_ok && line_ok;
  }
  rep << (all_ok ? "all checks passed" : "CHECKS FAILED") << "\n";

  std::cout << rep.str();
  if (!a.out.empty()) write_text_artifact(a.out, rep.str());
  return all_ok ? kExitOk : kExitVerifyFail;
}

// ---------------------------------------------------------------------------
// integrate
// ---------------------------------------------------------------------------

struct IntegrateArgs {
  std::string table_path;
  std::string phi = "builtin:on-test";
  double h = 1.0 / 32;
  double radius = 0.0;
  std::string mode = "double";
  bool compare_ref = false;
  int reference_digits = 16;
};

int run_integrate(const GlobalArgs& g, const IntegrateArgs& a) {
  apply_globals(g);
  singquad::WeightTable table = singquad::load_table(a.table_path);
  singquad::Integrand phi = singquad::builtin_integrand(a.phi);

  singquad::QuadratureConfig cfg;
  cfg.h = a.h;
  cfg.radius = a.radius;
  cfg.mode = singquad::parse_mode(a.mode);

  singquad::XReal q = singquad::corrected_quadrature(phi, table, cfg);
  int show = cfg.mode == singquad::PrecisionMode::extended ? singquad::working_digits() : 17;
  std::cout << "value= " << q.str(show) << "\n";
  if (a.compare_ref) {
    singquad::XReal ref =
        singquad::reference_integral(phi, table.kernel, table.alpha, a.reference_digits).value;
    std::cout << "reference= " << ref.str(std::max(a.reference_digits, 17)) << "\n";
    std::cout << "error= " << abs(q - ref).str(3) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corrected trapezoidal rules for 2D integrals with |x|^-(2+alpha) kernels"};
  app.require_subcommand(1);
  // keep the short flag space free for --h; help stays reachable as --help
  app.set_help_flag("--help", "Print help");

  GlobalArgs g;
  app.add_option("--working-digits", g.working_digits,
                 "Significant decimal digits carried by extended-precision arithmetic")
      ->default_val(50)
      ->check(CLI::Range(16, 1000));
  app.add_flag("--serial", g.serial,
               "Force deterministic serial execution (computation is always serial; "
               "flag accepted for reproducibility scripting)");

  // weights ------------------------------------------------------------------
  WeightsArgs wa;
  CLI::App* weights = app.add_subcommand("weights", "Solve for limiting correction weights");
  weights->set_help_flag("--help", "Print help");
  weights->fallthrough();
  weights->add_option("--kernel", wa.kernel, "on-diag-x1 | on-diag-x2 | off-diag")->required();
  weights->add_option("--alpha", wa.alpha, "Singularity strength, 0 < alpha < 2")->required();
  weights->add_option("--p", wa.p, "Stencil order")->required();
  weights->add_option("--h-base", wa.h_base, "Coarsest spacing of the extrapolation ladder")
      ->default_val(1.0 / 32);
  weights->add_option("--levels", wa.levels, "Ladder depth (h, h/2, ...)")->default_val(3);
  weights->add_option("--k", wa.k, "Regularizer exponent (0 = per-kernel default)")
      ->default_val(0);
  weights->add_option("--min-digits", wa.min_digits,
                      "Exit 4 when fewer digits are achieved (0 disables)")
      ->default_val(15);
  weights->add_option("--out", wa.out, "Write the table as JSON to this path");

  // convergence ---------------------------------------------------------------
  ConvergenceArgs ca;
  CLI::App* conv = app.add_subcommand("convergence", "Measure empirical convergence orders");
  conv->set_help_flag("--help", "Print help");
  conv->fallthrough();
  conv->add_option("--kernel", ca.kernel, "on-diag-x1 | on-diag-x2 | off-diag")->required();
  conv->add_option("--alpha", ca.alpha, "Singularity strength, 0 < alpha < 2")->required();
  conv->add_option("--p", ca.ps, "Stencil orders (repeat or comma-separate)")->delimiter(',');
  conv->add_option("--h", ca.hs, "Spacings (default 2^-3 ... 2^-9)")->delimiter(',');
  conv->add_option("--phi", ca.phi, "Integrand name (default per kernel)");
  conv->add_option("--mode", ca.mode, "double | extended")->default_val("double");
  conv->add_option("--floor", ca.floor_threshold, "Error floor excluded from the slope fit")
      ->default_val(1e-12);
  conv->add_option("--reference-digits", ca.reference_digits,
                   "Accuracy of the reference integral")
      ->default_val(16)
      ->check(CLI::Range(4, 400));
  conv->add_option("--k", ca.k, "Regularizer exponent for table generation (0 = default)")
      ->default_val(0);
  conv->add_option("--out", ca.out, "Write the CSV report to this path (default: stdout)");

  // verify-matrix --------------------------------------------------------------
  VerifyMatrixArgs va;
  CLI::App* verify = app.add_subcommand(
      "verify-matrix", "Certify coefficient-matrix structure in exact arithmetic");
  verify->set_help_flag("--help", "Print help");
  verify->fallthrough();
  verify->add_option("--kernel", va.kernel, "on-diag-x1 | on-diag-x2 | off-diag")->required();
  verify->add_option("--p-max", va.p_max, "Largest stencil order to certify")->required();
  verify->add_option("--trials", va.trials, "Random node sets per determinant identity")
      ->default_val(3)
      ->check(CLI::Range(1, 1000));
  verify->add_option("--seed", va.seed, "Seed for the random node sets")->default_val(20240817);
  verify->add_option("--out", va.out, "Write the text report to this path");

  // integrate -------------------------------------------------------------------
  IntegrateArgs ia;
  CLI::App* integ = app.add_subcommand("integrate", "Apply a stored weight table");
  integ->set_help_flag("--help", "Print help");
  integ->fallthrough();
  integ->add_option("--table", ia.table_path, "Weight-table JSON path")->required();
  integ->add_option("--phi", ia.phi, "Integrand name (builtin:on-test, builtin:off-test, "
                                     "builtin:g6, builtin:g8, builtin:zero)")
      ->default_val("builtin:on-test");
  integ->add_option("--h", ia.h, "Lattice spacing")->required();
  integ->add_option("--radius", ia.radius, "Summation radius (0 = integrand support)")
      ->default_val(0.0);
  integ->add_option("--mode", ia.mode, "double | extended")->default_val("double");
  integ->add_flag("--compare-ref", ia.compare_ref,
                  "Also compute a reference value and report the error");
  integ->add_option("--reference-digits", ia.reference_digits,
                    "Accuracy of the reference integral")
      ->default_val(16)
      ->check(CLI::Range(4, 400));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (weights->parsed()) return run_weights(g, wa);
    if (conv->parsed()) return run_convergence(g, ca);
    if (verify->parsed()) return run_verify_matrix(g, va);
    if (integ->parsed()) return run_integrate(g, ia);
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
  } catch (const singquad::NonConvergenceError& e) {
    std::cerr << "error (non-convergence): " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const singquad::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
