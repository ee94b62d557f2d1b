#pragma once

// Test-side oracles, independent of the library implementation paths they
// check.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "fbmsde/flow_detail.hpp"

namespace oracles {

/// Gauss-Legendre nodes and weights on [0,1]; exact for polynomials of
/// degree <= 2n-1. Nodes found by Newton iteration on P_n.
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline Quadrature gauss_legendre_unit(int n) {
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-like initial guess on [-1,1]
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    q.nodes[i] = 0.5 * (x + 1.0);
    q.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp); // already halved for [0,1]
  }
  return q;
}

inline double integrate_unit(const std::function<double(double)>& f, int points = 16) {
  const Quadrature q = gauss_legendre_unit(points);
  double acc = 0.0;
  for (int i = 0; i < points; ++i) acc += q.weights[i] * f(q.nodes[i]);
  return acc;
}

/// Numerical-quadrature route to the discrete-measure weights: integrates
/// the Lagrange basis product prod_{k != j} (2(m-1)u - k)/(j - k) over [0,1].
inline double lagrange_weight_by_quadrature(int m, int j) {
  const int s = 2 * (m - 1);
  const int count = 2 * (m - 1) + 1;
  return integrate_unit([&](double u) {
    double prod = 1.0;
    for (int k = 0; k < count; ++k) {
      if (k == j) continue;
      prod *= (s * u - k) / static_cast<double>(j - k);
    }
    return prod;
  });
}

/// High-precision flow in long double (for expansion-order fits where the
/// double path would sit in round-off).
inline long double flow_ld(const std::function<long double(long double)>& sigma,
                           long double x, long double t) {
  std::array<long double, 1> y{x};
  fbmsde::flows::detail::IntegrateOptions<long double> opt;
  opt.abs_tol = 1e-17L;
  opt.rel_tol = 1e-17L;
  fbmsde::flows::detail::integrate<long double, 1>(
      y, 0.0L, t,
      [&](const std::array<long double, 1>& s, std::array<long double, 1>& d) {
        d[0] = sigma(s[0]);
      },
      opt);
  return y[0];
}

/// Inverse of flow_ld in its time argument (plain Newton; the callers pass
/// well-conditioned inputs).
inline long double flow_time_ld(const std::function<long double(long double)>& sigma,
                                long double x, long double y) {
  long double t = (y - x) / sigma(x);
  for (int i = 0; i < 200; ++i) {
    const long double phi = flow_ld(sigma, x, t);
    const long double f = phi - y;
    if (std::fabs(f) < 1e-18L * (1.0L + std::fabs(y))) break;
    t -= f / sigma(phi);
  }
  return t;
}

/// One implicit-midpoint step in long double: solves
/// y = x + (sigma(x)+sigma(y))/2 * d by fixed-point iteration (contraction
/// for small d).
inline long double implicit_midpoint_step(const std::function<long double(long double)>& sigma,
                                          long double x, long double d) {
  const long double sx = sigma(x);
  long double y = x + sx * d;
  for (int i = 0; i < 200; ++i) {
    const long double next = x + 0.5L * (sx + sigma(y)) * d;
    if (std::fabs(next - y) < 1e-21L * (1.0L + std::fabs(next))) return next;
    y = next;
  }
  return y;
}

} // namespace oracles
