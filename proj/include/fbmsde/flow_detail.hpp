#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "fbmsde/errors.hpp"

namespace fbmsde::flows::detail {

/// Controller settings for the embedded Dormand-Prince 5(4) pair.
template <class Real>
struct IntegrateOptions {
  Real abs_tol = Real(1e-10);
  Real rel_tol = Real(1e-10);
  Real max_magnitude = Real(1e8);
  Real max_step = Real(0); // 0 = unlimited
  std::int64_t max_steps = 1'000'000;
};

/// Integrates y' = rhs(y) from t0 to t1 (either direction) with adaptive
/// step control. `rhs(const State&, State&)` fills the derivative. Throws
/// DivergenceError when the state magnitude escapes, SearchError when the
/// step budget runs out.
template <class Real, std::size_t N, class Rhs>
void integrate(std::array<Real, N>& y, Real t0, Real t1, Rhs&& rhs,
               const IntegrateOptions<Real>& opt) {
  using State = std::array<Real, N>;
  if (t1 == t0) return;

  // Dormand-Prince 5(4) tableau
  constexpr Real a21 = Real(1) / Real(5);
  constexpr Real a31 = Real(3) / Real(40), a32 = Real(9) / Real(40);
  constexpr Real a41 = Real(44) / Real(45), a42 = Real(-56) / Real(15),
                 a43 = Real(32) / Real(9);
  constexpr Real a51 = Real(19372) / Real(6561), a52 = Real(-25360) / Real(2187),
                 a53 = Real(64448) / Real(6561), a54 = Real(-212) / Real(729);
  constexpr Real a61 = Real(9017) / Real(3168), a62 = Real(-355) / Real(33),
                 a63 = Real(46732) / Real(5247), a64 = Real(49) / Real(176),
                 a65 = Real(-5103) / Real(18656);
  constexpr Real b1 = Real(35) / Real(384), b3 = Real(500) / Real(1113),
                 b4 = Real(125) / Real(192), b5 = Real(-2187) / Real(6784),
                 b6 = Real(11) / Real(84);
  constexpr Real e1 = Real(71) / Real(57600), e3 = Real(-71) / Real(16695),
                 e4 = Real(71) / Real(1920), e5 = Real(-17253) / Real(339200),
                 e6 = Real(22) / Real(525), e7 = Real(-1) / Real(40);

  const Real direction = t1 > t0 ? Real(1) : Real(-1);
  const Real span = std::fabs(t1 - t0);

  auto check_state = [&](const State& s, Real t) {
    for (Real v : s) {
      if (!(std::fabs(v) <= opt.max_magnitude))
        throw DivergenceError("ODE state escaped the magnitude bound",
                              static_cast<double>(t));
    }
  };

  State k1, k2, k3, k4, k5, k6, k7, tmp, y5;
  rhs(y, k1);

  // initial step from the first derivative magnitude
  Real scale0 = Real(0);
  for (std::size_t i = 0; i < N; ++i)
    scale0 = std::max(scale0, std::fabs(k1[i]) / (opt.abs_tol + opt.rel_tol * std::fabs(y[i])));
  Real h = scale0 > Real(0) ? Real(0.01) / scale0 : span;
  h = std::min(h, span);
  if (opt.max_step > Real(0)) h = std::min(h, opt.max_step);
  h = std::max(h, span * std::numeric_limits<Real>::epsilon() * Real(16));

  Real t = Real(0); // distance travelled along the direction
  std::int64_t steps = 0;
  bool first_same_as_last_valid = true; // k1 computed above

  while (t < span) {
    if (++steps > opt.max_steps)
      throw SearchError("ODE integration exceeded the step budget");
    h = std::min(h, span - t);
    const Real hs = h * direction;

    if (!first_same_as_last_valid) rhs(y, k1);

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * a21 * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    rhs(tmp, k3);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    rhs(tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      y5[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(y5, k7);

    Real err = Real(0);
    for (std::size_t i = 0; i < N; ++i) {
      const Real e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                           e6 * k6[i] + e7 * k7[i]);
      const Real tol = opt.abs_tol + opt.rel_tol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
      err += (e / tol) * (e / tol);
    }
    err = std::sqrt(err / Real(N));

    if (err <= Real(1)) {
      t += h;
      y = y5;
      k1 = k7; // FSAL
      first_same_as_last_valid = true;
      check_state(y, t0 + direction * t);
    } else {
      first_same_as_last_valid = true; // k1 still holds f(y)
    }

    const Real safety = Real(0.9);
    Real factor = err > Real(0)
                      ? safety * std::pow(err, Real(-0.2))
                      : Real(5);
    factor = std::min(Real(5), std::max(Real(0.2), factor));
    h *= factor;
    if (opt.max_step > Real(0)) h = std::min(h, opt.max_step);
    const Real h_min = span * std::numeric_limits<Real>::epsilon() * Real(16);
    if (h < h_min) h = h_min;
  }
}

} // namespace fbmsde::flows::detail
