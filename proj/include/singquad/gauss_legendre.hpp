#pragma once

// Gauss-Legendre nodes and weights on [-1, 1] at the current working
// precision.  Nodes are Newton-refined roots of P_n starting from the
// Chebyshev-angle guesses; weights are 2 / ((1-x^2) P_n'(x)^2).  Rules are
// cached per (order, precision).

#include "singquad/xreal.hpp"

#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace singquad {

struct GLRule {
  std::vector<XReal> nodes;    // ascending in (-1, 1)
  std::vector<XReal> weights;  // positive, summing to 2
};

namespace detail {

// P_n(x) and P_n'(x) by the three-term recurrence.
inline std::pair<XReal, XReal> legendre_and_derivative(int n, const XReal& x) {
  XReal p0(1), p1 = x;
  for (int j = 2; j <= n; ++j) {
    XReal p2 = (XReal(2 * j - 1) * x * p1 - XReal(j - 1) * p0) / XReal(j);
    p0 = p1;
    p1 = p2;
  }
  // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
  XReal dp = XReal(n) * (x * p1 - p0) / (x * x - XReal(1));
  return {p1, dp};
}

}  // namespace detail

inline const GLRule& gauss_legendre_rule(int n) {
  if (n < 2) throw DomainError("gauss_legendre_rule: order must be >= 2");
  static std::map<std::pair<int, int>, std::unique_ptr<GLRule>> cache;
  auto key = std::make_pair(n, working_digits());
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto rule = std::make_unique<GLRule>();
  rule->nodes.resize(static_cast<std::size_t>(n));
  rule->weights.resize(static_cast<std::size_t>(n));
  XReal pi = XReal::pi();
  XReal tol = pow(XReal(10), -static_cast<long>(working_digits() + 2));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-angle initial guess for the (i+1)-th root from the top.
    XReal x = cos(pi * (XReal(i) + XReal(0.75)) / (XReal(n) + XReal(0.5)));
    XReal dp(1);
    for (int iter = 0; iter < 60; ++iter) {
      auto [p, d] = detail::legendre_and_derivative(n, x);
      dp = d;
      XReal dx = p / d;
      x -= dx;
      if (abs(dx) < tol) break;
    }
    auto [p_final, d_final] = detail::legendre_and_derivative(n, x);
    dp = d_final;
    XReal w = XReal(2) / ((XReal(1) - x * x) * dp * dp);
    rule->nodes[static_cast<std::size_t>(i)] = -x;  // guesses start near +1
    rule->weights[static_cast<std::size_t>(i)] = w;
    rule->nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule->weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) {
    // middle node is exactly zero
    auto [p, d] = detail::legendre_and_derivative(n, XReal(0));
    (void)p;
    rule->nodes[static_cast<std::size_t>(n / 2)] = XReal(0);
    rule->weights[static_cast<std::size_t>(n / 2)] = XReal(2) / (d * d);
  }
  const GLRule& ref = *rule;
  cache.emplace(key, std::move(rule));
  return ref;
}

}  // namespace singquad
