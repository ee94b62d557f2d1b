#include "fbmsde/flow.hpp"

#include <cmath>

namespace fbmsde::flows {
namespace {

void require_nonvanishing_between(const VectorField& field, double x, double y) {
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  const int probes = 65;
  double first_sign = 0.0;
  for (int i = 0; i < probes; ++i) {
    const double p = lo + (hi - lo) * static_cast<double>(i) / (probes - 1);
    const double v = field(p);
    if (v == 0.0)
      throw DomainError("flow inverse requires a nonvanishing coefficient between "
                        "the endpoints (zero found at x=" + std::to_string(p) + ")");
    const double s = v > 0.0 ? 1.0 : -1.0;
    if (first_sign == 0.0) first_sign = s;
    if (s != first_sign)
      throw DomainError("flow inverse requires a nonvanishing coefficient between "
                        "the endpoints (sign change detected)");
  }
}

} // namespace

double flow(double x, double t, const VectorField& field, const FlowOptions& opt) {
  std::array<double, 1> y{x};
  detail::integrate<double, 1>(
      y, 0.0, t, [&](const std::array<double, 1>& s, std::array<double, 1>& d) {
        d[0] = field(s[0]);
      },
      opt);
  return y[0];
}

double flow_inverse(double x, double y, const VectorField& field, double tol,
                    const FlowOptions& opt) {
  if (y == x) return 0.0;
  require_nonvanishing_between(field, x, y);

  auto residual = [&](double t) { return flow(x, t, field, opt) - y; };

  // First-order guess; sigma(x) != 0 by the check above.
  const double guess = (y - x) / field(x);
  const double dir = guess >= 0.0 ? 1.0 : -1.0;

  // Expand geometrically until the residual changes sign.
  const double f0 = x - y;
  double step = std::max(std::fabs(guess), 1e-12);
  double t_lo = 0.0, f_lo = f0;
  double t_hi = 0.0, f_hi = f0;
  bool bracketed = false;
  for (int i = 0; i < 40; ++i) {
    t_hi = dir * step;
    f_hi = residual(t_hi);
    if ((f_hi > 0.0) != (f_lo > 0.0) || f_hi == 0.0) {
      bracketed = true;
      break;
    }
    t_lo = t_hi;
    f_lo = f_hi;
    step *= 2.0;
  }
  if (!bracketed)
    throw SearchError("flow inverse could not bracket a solution time");

  // Safeguarded Newton on t; derivative of the residual is sigma(phi(x,t)).
  double a = std::min(t_lo, t_hi), b = std::max(t_lo, t_hi);
  double fa = t_lo <= t_hi ? f_lo : f_hi;
  double t = 0.5 * (a + b);
  double ft = residual(t);
  for (int iter = 0; iter < 100; ++iter) {
    if (std::fabs(ft) <= tol) return t;
    const double slope = field(flow(x, t, field, opt));
    double t_next = (slope != 0.0) ? t - ft / slope : 0.5 * (a + b);
    if (!(t_next > a && t_next < b)) t_next = 0.5 * (a + b);
    // shrink the bracket
    if ((ft > 0.0) == (fa > 0.0)) {
      a = t;
      fa = ft;
    } else {
      b = t;
    }
    t = t_next;
    ft = residual(t);
  }
  if (std::fabs(ft) <= tol * 8.0) return t;
  throw SearchError("flow inverse did not converge to the requested tolerance");
}

double doss_map(double x, double a, const VectorField& field, const FlowOptions& opt) {
  return flow(a, x, field, opt);
}

double doss_map_y_derivative(double x, double a, const VectorField& field,
                             const FlowOptions& opt) {
  std::array<double, 2> y{a, 1.0};
  detail::integrate<double, 2>(
      y, 0.0, x, [&](const std::array<double, 2>& s, std::array<double, 2>& d) {
        d[0] = field(s[0]);
        d[1] = field.derivative(1, s[0]) * s[1];
      },
      opt);
  return y[1];
}

ExpansionCoefficients expansion_coefficients(const VectorField& field, double x) {
  if (field.analytic_depth() < 4)
    throw CapabilityError("expansion coefficients need analytic derivatives through "
                          "order four; field '" + field.name() + "' provides " +
                          std::to_string(field.analytic_depth()));
  const double s = field(x);
  const double s1 = field.derivative(1, x);
  const double s2 = field.derivative(2, x);
  const double s3 = field.derivative(3, x);
  const double s4 = field.derivative(4, x);

  ExpansionCoefficients c{};
  // (sigma^2)''/24 in expanded form, and sigma*(sigma^2)'''/48 likewise.
  c.f3 = (s1 * s1 + s * s2) / 12.0;
  c.f4 = s * (3.0 * s1 * s2 + s * s3) / 24.0;
  c.f5 = std::pow(s1, 4) / 80.0 + s * s * s1 * s3 / 15.0 +
         3.0 * s * s1 * s1 * s2 / 40.0 + s * s * s2 * s2 / 20.0 +
         s * s * s * s4 / 80.0;
  return c;
}

} // namespace fbmsde::flows
