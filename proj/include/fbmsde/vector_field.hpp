#pragma once

#include <functional>
#include <optional>
#include <string>

namespace fbmsde {

/// Scalar coefficient function (a diffusion sigma or a drift b) together with
/// its derivatives up to order four. Analytic derivative closures are
/// preferred; when absent, central finite differences back the missing orders
/// and the field is flagged reduced-accuracy.
class VectorField {
public:
  using Fn = std::function<double(double)>;

  /// Field with analytic derivatives up to `depth` (0..4). Derivative
  /// closures beyond depth may be null. Runs a finite-difference consistency
  /// probe on the supplied closures and throws DomainError on mismatch.
  static VectorField analytic(std::string name, Fn f, Fn d1 = nullptr,
                              Fn d2 = nullptr, Fn d3 = nullptr, Fn d4 = nullptr);

  /// Field from the bare function; all derivatives fall back to central
  /// finite differences (reduced accuracy).
  static VectorField from_eval_only(std::string name, Fn f);

  double operator()(double x) const { return f_(x); }
  /// k-th derivative, k in 1..4. Uses the analytic closure when present,
  /// nested central differences otherwise.
  double derivative(int k, double x) const;

  int analytic_depth() const { return analytic_depth_; }
  bool reduced_accuracy() const { return analytic_depth_ < 4; }
  const std::string& name() const { return name_; }

  /// True for the field x -> x; lets the Crank-Nicholson stepper use the
  /// exact rational one-step update.
  bool is_identity() const { return identity_; }
  VectorField& mark_identity() {
    identity_ = true;
    return *this;
  }

  std::optional<double> lipschitz_hint;

private:
  VectorField() = default;

  Fn f_;
  Fn d_[4] = {nullptr, nullptr, nullptr, nullptr};
  int analytic_depth_ = 0;
  bool identity_ = false;
  std::string name_;

  double finite_difference(int k, double x) const;
  void probe_consistency() const;
};

/// Diffusion coefficient with sigma(x)^2 = alpha x^2 + beta x + gamma.
/// For beta = gamma = 0 (alpha >= 0) the smooth representative
/// sigma(x) = sqrt(alpha) * x is used; otherwise sigma = sqrt of the
/// quadratic, which must stay positive on the probed domain.
struct QuadraticSigmaSquared {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  VectorField field() const;
};

} // namespace fbmsde
