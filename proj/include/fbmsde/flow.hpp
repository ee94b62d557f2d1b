#pragma once

#include "fbmsde/flow_detail.hpp"
#include "fbmsde/vector_field.hpp"

namespace fbmsde::flows {

using FlowOptions = detail::IntegrateOptions<double>;

inline FlowOptions flow_options(double tol) {
  FlowOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  return opt;
}

/// phi(x, t): value at time t of y' = sigma(y), y(0) = x.
double flow(double x, double t, const VectorField& field, const FlowOptions& opt = {});

/// Inverse of the flow in its time argument: the t with |phi(x,t) - y| <= tol.
/// Requires sigma nonvanishing on the closed interval between x and y
/// (checked on a sample grid). Safeguarded Newton with geometric bracketing.
double flow_inverse(double x, double y, const VectorField& field, double tol = 1e-10,
                    const FlowOptions& opt = {});

/// Two-parameter solution map u(x, a) = phi(a, x): du/dx = sigma(u),
/// u(0, a) = a.
double doss_map(double x, double a, const VectorField& field, const FlowOptions& opt = {});

/// du/da(x, a), obtained from the variational equation v' = sigma'(u) v,
/// v(0) = 1 integrated alongside u. Strictly positive.
double doss_map_y_derivative(double x, double a, const VectorField& field,
                             const FlowOptions& opt = {});

/// Coefficients of the one-step expansion of the implicit midpoint update in
/// powers of the driving increment: the flow-time offset is
/// f3 d^3 + f4 d^4 + f5 d^5 + O(d^6).
struct ExpansionCoefficients {
  double f3;
  double f4;
  double f5;
};

/// Requires analytic derivatives through order four (CapabilityError
/// otherwise): finite differences cannot support the high-order terms.
ExpansionCoefficients expansion_coefficients(const VectorField& field, double x);

/// Immutable flow-map handle bundling a field with solver settings.
class FlowMap {
public:
  FlowMap(VectorField field, double tolerance = 1e-10, double max_step = 0.0)
      : field_(std::move(field)) {
    opts_ = flow_options(tolerance);
    opts_.max_step = max_step;
  }

  double operator()(double x, double t) const { return flow(x, t, field_, opts_); }
  const VectorField& field() const { return field_; }
  const FlowOptions& options() const { return opts_; }

private:
  VectorField field_;
  FlowOptions opts_;
};

} // namespace fbmsde::flows
