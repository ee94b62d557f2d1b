#include "fbmsde/vector_field.hpp"

#include <cmath>
#include <limits>

#include "fbmsde/errors.hpp"

namespace fbmsde {
namespace {

constexpr double kProbePoints[] = {-1.7, -0.3, 0.0, 0.4, 1.1, 2.3};

double fd_step(double x) {
  static const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
  return h0 * std::max(1.0, std::fabs(x));
}

} // namespace

VectorField VectorField::analytic(std::string name, Fn f, Fn d1, Fn d2, Fn d3, Fn d4) {
  VectorField v;
  v.name_ = std::move(name);
  v.f_ = std::move(f);
  if (!v.f_) throw DomainError("vector field requires an evaluation closure");
  Fn ds[4] = {std::move(d1), std::move(d2), std::move(d3), std::move(d4)};
  int depth = 0;
  for (int k = 0; k < 4; ++k) {
    if (!ds[k]) break;
    v.d_[k] = std::move(ds[k]);
    depth = k + 1;
  }
  v.analytic_depth_ = depth;
  v.probe_consistency();
  return v;
}

VectorField VectorField::from_eval_only(std::string name, Fn f) {
  VectorField v;
  v.name_ = std::move(name);
  v.f_ = std::move(f);
  if (!v.f_) throw DomainError("vector field requires an evaluation closure");
  v.analytic_depth_ = 0;
  return v;
}

double VectorField::derivative(int k, double x) const {
  if (k < 1 || k > 4) throw DomainError("derivative order must be in 1..4");
  if (k <= analytic_depth_) return d_[k - 1](x);
  return finite_difference(k, x);
}

double VectorField::finite_difference(int k, double x) const {
  const double h = fd_step(x);
  if (k == analytic_depth_ + 1 && analytic_depth_ >= 1) {
    // central difference of the deepest analytic derivative
    return (d_[analytic_depth_ - 1](x + h) - d_[analytic_depth_ - 1](x - h)) / (2.0 * h);
  }
  if (k == 1) return (f_(x + h) - f_(x - h)) / (2.0 * h);
  // nested central differences; accuracy decays quickly with order
  return (finite_difference(k - 1, x + h) - finite_difference(k - 1, x - h)) / (2.0 * h);
}

void VectorField::probe_consistency() const {
  for (int k = 1; k <= analytic_depth_; ++k) {
    for (double x : kProbePoints) {
      const double h = fd_step(x);
      const double fd = (k == 1)
                            ? (f_(x + h) - f_(x - h)) / (2.0 * h)
                            : (d_[k - 2](x + h) - d_[k - 2](x - h)) / (2.0 * h);
      const double dk = d_[k - 1](x);
      if (!std::isfinite(dk) || !std::isfinite(fd)) continue;
      if (std::fabs(fd - dk) > 1e-5 * std::max(1.0, std::fabs(dk))) {
        throw DomainError("vector field '" + name_ + "': derivative of order " +
                          std::to_string(k) + " disagrees with finite differences at x=" +
                          std::to_string(x));
      }
    }
  }
}

VectorField QuadraticSigmaSquared::field() const {
  const double a = alpha, b = beta, g = gamma;
  if (b == 0.0 && g == 0.0) {
    if (a < 0.0) throw DomainError("quadratic sigma^2 with beta=gamma=0 needs alpha >= 0");
    const double s = std::sqrt(a);
    return VectorField::analytic(
        "quadratic-ss", [s](double x) { return s * x; }, [s](double) { return s; },
        [](double) { return 0.0; }, [](double) { return 0.0; },
        [](double) { return 0.0; });
  }
  auto q = [a, b, g](double x) { return (a * x + b) * x + g; };
  for (double x : kProbePoints) {
    if (q(x) <= 0.0)
      throw DomainError("quadratic sigma^2 must stay positive on the probe grid");
  }
  auto sig = [q](double x) { return std::sqrt(q(x)); };
  auto sig1 = [a, b, q](double x) { return (2.0 * a * x + b) / (2.0 * std::sqrt(q(x))); };
  auto sig2 = [a, b, q](double x) {
    const double s = std::sqrt(q(x));
    const double qp = 2.0 * a * x + b;
    return (2.0 * a * q(x) - 0.5 * qp * qp) / (2.0 * q(x) * s);
  };
  return VectorField::analytic("quadratic-ss", sig, sig1, sig2);
}

} // namespace fbmsde
