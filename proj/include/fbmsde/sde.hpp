#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fbmsde/fbm.hpp"
#include "fbmsde/flow.hpp"
#include "fbmsde/vector_field.hpp"

namespace fbmsde::sde {

/// dX = sigma(X) dB + b(X) dt on [0, T], X_0 = x0, driven by fBm of index H.
struct SdeProblem {
  VectorField sigma;
  std::optional<VectorField> drift; // absent = zero drift
  double x0 = 0.0;
  double T = 1.0;
  HurstIndex hurst;

  bool zero_drift() const { return !drift.has_value(); }
};

enum class MethodTag { closed_flow, doss_sussmann, euler, crank_nicholson };

struct SolutionPath {
  double horizon;
  std::vector<double> values; // n+1 samples, values[0] == x0
  MethodTag method_tag;
  /// Implicit-solve iteration counts per step (Crank-Nicholson only).
  std::vector<int> solver_iterations;

  std::int64_t steps() const { return static_cast<std::int64_t>(values.size()) - 1; }
};

/// Which representation the drift-absorbing solver uses:
///   two_parameter  X = u(B, x0 + A) with the drift state A from
///                  A' = b(u)/u_a', A0 = 0
///   shifted_flow   X = S(B + A) with A' = (b o S / sigma o S)(B + A);
///                  needs sigma bounded away from zero on the reachable range
enum class DossForm { two_parameter, shifted_flow };

/// Zero-drift closed form X_k = phi(x0, B_k). Rejects problems whose drift
/// does not vanish on the flow-reachable range (checked on a probe grid).
SolutionPath solve_zero_drift(const SdeProblem& problem, const fbm::FbmPath& path,
                              const flows::FlowOptions& opt = flows::flow_options(1e-12));

/// Doss-Sussmann solution along the sampled path, with B piecewise linear
/// between grid points.
SolutionPath solve_doss_sussmann(const SdeProblem& problem, const fbm::FbmPath& path,
                                 double ode_tol = 1e-10,
                                 DossForm form = DossForm::two_parameter);

/// Explicit Euler: X_{k+1} = X_k + sigma(X_k) dB_k + b(X_k) dt.
SolutionPath euler_scheme(const SdeProblem& problem, const fbm::FbmPath& path);

/// Implicit midpoint-in-sigma update
///   X_{k+1} = X_k + (sigma(X_k)+sigma(X_{k+1}))/2 * dB_k
/// solved per step by safeguarded Newton from the explicit predictor. The
/// identity field x -> x uses the exact rational update
/// X_k (1 + d/2)/(1 - d/2) and reports a pole when |d| >= 2. Drift must be
/// zero. Iteration counts are recorded in the result.
SolutionPath crank_nicholson_scheme(const SdeProblem& problem, const fbm::FbmPath& path,
                                    double solve_tol = 1e-12);

/// Discrete integral-equation residual: max over grid times t of
/// | X_t - x0 - NC_m(sigma, X, B)|_0^t - trapezoid(b(X))|_0^t |.
double residual_check(const SdeProblem& problem, const SolutionPath& solution,
                      const fbm::FbmPath& path, int m);

} // namespace fbmsde::sde
