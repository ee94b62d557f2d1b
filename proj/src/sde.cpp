#include "fbmsde/sde.hpp"

#include <algorithm>
#include <cmath>

#include "fbmsde/rvint.hpp"

namespace fbmsde::sde {
namespace {

double span_min(const std::vector<double>& v) {
  return *std::min_element(v.begin(), v.end());
}
double span_max(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end());
}

// The closed-form flow solution exists only when the drift vanishes on the
// range the flow can reach; probed over the span of the observed path plus
// a margin.
void require_drift_vanishes_on_flow_range(const SdeProblem& problem,
                                          const fbm::FbmPath& path,
                                          const flows::FlowOptions& opt) {
  if (problem.zero_drift()) return;
  const VectorField& b = *problem.drift;
  const double lo = span_min(path.values) - 0.25;
  const double hi = span_max(path.values) + 0.25;
  const int probes = 17;
  for (int i = 0; i < probes; ++i) {
    const double z = lo + (hi - lo) * static_cast<double>(i) / (probes - 1);
    const double x = flows::flow(problem.x0, z, problem.sigma, opt);
    if (std::fabs(b(x)) > 1e-10 * std::max(1.0, std::fabs(x)))
      throw ModelError("closed-form flow solution requires the drift to vanish on "
                       "the flow-reachable range; drift is nonzero at x=" +
                       std::to_string(x));
  }
}

void require_zero_drift(const SdeProblem& problem, const char* scheme) {
  if (problem.zero_drift()) return;
  const VectorField& b = *problem.drift;
  for (double z = -4.0; z <= 4.0; z += 0.5) {
    if (b(z) != 0.0)
      throw ModelError(std::string(scheme) + " is defined for zero drift only");
  }
}

// Inner evaluation of the two-parameter map and its a-derivative along one
// nested integration; used by the drift ODE right-hand side.
struct MapWithDerivative {
  double u;
  double du_da;
};

MapWithDerivative eval_map(double x, double a, const VectorField& sigma,
                           const flows::FlowOptions& opt) {
  std::array<double, 2> y{a, 1.0};
  flows::detail::integrate<double, 2>(
      y, 0.0, x, [&](const std::array<double, 2>& s, std::array<double, 2>& d) {
        d[0] = sigma(s[0]);
        d[1] = sigma.derivative(1, s[0]) * s[1];
      },
      opt);
  if (std::fabs(y[1]) <= 1e-300)
    throw SingularityError("two-parameter map derivative underflowed");
  return {y[0], y[1]};
}

} // namespace

SolutionPath solve_zero_drift(const SdeProblem& problem, const fbm::FbmPath& path,
                              const flows::FlowOptions& opt) {
  require_drift_vanishes_on_flow_range(problem, path, opt);
  SolutionPath out;
  out.horizon = path.horizon;
  out.method_tag = MethodTag::closed_flow;
  out.values.resize(path.values.size());
  out.values[0] = problem.x0;
  for (std::size_t k = 1; k < path.values.size(); ++k)
    out.values[k] = flows::flow(problem.x0, path.values[k], problem.sigma, opt);
  return out;
}

SolutionPath solve_doss_sussmann(const SdeProblem& problem, const fbm::FbmPath& path,
                                 double ode_tol, DossForm form) {
  const VectorField& sigma = problem.sigma;
  flows::FlowOptions opt = flows::flow_options(ode_tol);

  SolutionPath out;
  out.horizon = path.horizon;
  out.method_tag = MethodTag::doss_sussmann;
  out.values.resize(path.values.size());
  out.values[0] = problem.x0;

  if (form == DossForm::shifted_flow) {
    // sigma(x0) = 0 forces the constant solution (and needs b(x0) = 0).
    if (sigma(problem.x0) == 0.0) {
      if (!problem.zero_drift() && std::fabs((*problem.drift)(problem.x0)) != 0.0)
        throw ModelError("shifted-flow solution with sigma(x0) = 0 exists only when "
                         "the drift also vanishes at x0");
      std::fill(out.values.begin(), out.values.end(), problem.x0);
      return out;
    }
  }

  if (problem.zero_drift()) {
    // A stays identically zero; the map reduces to the zero-drift flow.
    for (std::size_t k = 1; k < path.values.size(); ++k)
      out.values[k] = flows::flow(problem.x0, path.values[k], sigma, opt);
    return out;
  }
  const VectorField& b = *problem.drift;

  if (form == DossForm::shifted_flow) {
    // needs sigma bounded away from zero on the reachable range
    const double lo = span_min(path.values) - 0.25;
    const double hi = span_max(path.values) + 0.25;
    for (int i = 0; i < 9; ++i) {
      const double z = lo + (hi - lo) * static_cast<double>(i) / 8.0;
      const double w = flows::flow(problem.x0, z, sigma, opt);
      if (std::fabs(sigma(w)) < 1e-8)
        throw ModelError("shifted-flow solution needs the diffusion coefficient "
                         "bounded away from zero on the reachable range");
    }
  }

  const double dt = path.dt();
  const double x0 = problem.x0;
  double shift = 0.0; // the drift state A, zero at t = 0
  for (std::size_t k = 0; k + 1 < path.values.size(); ++k) {
    const double b_left = path.values[k];
    const double slope = (path.values[k + 1] - path.values[k]) / dt;

    // B is piecewise linear, so the drift ODE is integrated per cell with a
    // clock component carrying the in-cell time.
    std::array<double, 2> state{shift, 0.0};
    if (form == DossForm::two_parameter) {
      flows::detail::integrate<double, 2>(
          state, 0.0, dt,
          [&](const std::array<double, 2>& s, std::array<double, 2>& d) {
            const double x_b = b_left + slope * s[1];
            const MapWithDerivative m = eval_map(x_b, x0 + s[0], sigma, opt);
            d[0] = b(m.u) / m.du_da;
            d[1] = 1.0;
          },
          opt);
    } else {
      flows::detail::integrate<double, 2>(
          state, 0.0, dt,
          [&](const std::array<double, 2>& s, std::array<double, 2>& d) {
            const double z = b_left + slope * s[1] + s[0];
            const double w = flows::flow(x0, z, sigma, opt);
            const double sw = sigma(w);
            if (std::fabs(sw) < 1e-12)
              throw SingularityError("diffusion coefficient vanished along the "
                                     "shifted-flow drift ODE");
            d[0] = b(w) / sw;
            d[1] = 1.0;
          },
          opt);
    }
    shift = state[0];

    const double b_right = path.values[k + 1];
    out.values[k + 1] =
        form == DossForm::two_parameter
            ? flows::doss_map(b_right, x0 + shift, sigma, opt)
            : flows::flow(x0, b_right + shift, sigma, opt);
  }
  return out;
}

SolutionPath euler_scheme(const SdeProblem& problem, const fbm::FbmPath& path) {
  const double dt = path.dt();
  SolutionPath out;
  out.horizon = path.horizon;
  out.method_tag = MethodTag::euler;
  out.values.resize(path.values.size());
  double x = problem.x0;
  out.values[0] = x;
  for (std::size_t k = 0; k + 1 < path.values.size(); ++k) {
    const double db = path.values[k + 1] - path.values[k];
    double next = x + problem.sigma(x) * db;
    if (!problem.zero_drift()) next += (*problem.drift)(x) * dt;
    x = next;
    if (!std::isfinite(x) || std::fabs(x) > 1e12)
      throw DivergenceError("Euler scheme diverged at step " + std::to_string(k),
                            path.time_at(static_cast<std::int64_t>(k)));
    out.values[k + 1] = x;
  }
  return out;
}

SolutionPath crank_nicholson_scheme(const SdeProblem& problem, const fbm::FbmPath& path,
                                    double solve_tol) {
  require_zero_drift(problem, "the implicit midpoint scheme");
  const VectorField& sigma = problem.sigma;

  SolutionPath out;
  out.horizon = path.horizon;
  out.method_tag = MethodTag::crank_nicholson;
  out.values.resize(path.values.size());
  out.solver_iterations.assign(path.values.size() - 1, 0);

  double x = problem.x0;
  out.values[0] = x;
  for (std::size_t k = 0; k + 1 < path.values.size(); ++k) {
    const double d = path.values[k + 1] - path.values[k];
    const auto step_index = static_cast<std::int64_t>(k);

    if (sigma.is_identity()) {
      if (std::fabs(d) >= 2.0)
        throw SchemeStepError("implicit midpoint update hits the pole |increment| >= 2",
                              step_index, SchemeStepError::Kind::pole);
      x *= (1.0 + 0.5 * d) / (1.0 - 0.5 * d);
      out.values[k + 1] = x;
      continue;
    }

    const double sx = sigma(x);
    const double predictor = x + sx * d;
    auto g = [&](double yv) { return yv - x - 0.5 * (sx + sigma(yv)) * d; };

    double lo = x - 2.0 * std::fabs(sx * d) - 1.0;
    double hi = x + 2.0 * std::fabs(sx * d) + 1.0;
    double glo = g(lo), ghi = g(hi);
    if ((glo > 0.0) == (ghi > 0.0))
      throw SchemeStepError("implicit midpoint step has no bracketed root",
                            step_index, SchemeStepError::Kind::no_root);

    double y = predictor;
    double gy = g(y);
    int iter = 0;
    for (; iter < 50 && std::fabs(gy) > solve_tol; ++iter) {
      const double slope = 1.0 - 0.5 * sigma.derivative(1, y) * d;
      double next = slope != 0.0 ? y - gy / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if ((gy > 0.0) == (glo > 0.0)) {
        lo = y;
        glo = gy;
      } else {
        hi = y;
        ghi = gy;
      }
      y = next;
      gy = g(y);
    }
    if (std::fabs(gy) > solve_tol * 8.0)
      throw SchemeStepError("implicit midpoint step did not converge", step_index,
                            SchemeStepError::Kind::no_root);
    out.solver_iterations[k] = iter;
    x = y;
    out.values[k + 1] = x;
  }
  return out;
}

double residual_check(const SdeProblem& problem, const SolutionPath& solution,
                      const fbm::FbmPath& path, int m) {
  if (solution.values.size() != path.values.size())
    throw DomainError("solution and path must share the grid");
  const rvint::NewtonCotesMeasure nu = rvint::newton_cotes_measure(m);
  const double dt = path.dt();
  const std::size_t n = path.values.size() - 1;

  double nc_acc = 0.0;
  double drift_acc = 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double yk = solution.values[k];
    const double dy = solution.values[k + 1] - yk;
    double avg = 0.0;
    for (std::size_t j = 0; j < nu.nodes.size(); ++j)
      avg += nu.weights[j] * problem.sigma(yk + nu.nodes[j] * dy);
    nc_acc += avg * (path.values[k + 1] - path.values[k]);
    if (!problem.zero_drift()) {
      const VectorField& b = *problem.drift;
      drift_acc += 0.5 * (b(solution.values[k]) + b(solution.values[k + 1])) * dt;
    }
    const double residual =
        solution.values[k + 1] - problem.x0 - nc_acc - drift_acc;
    worst = std::max(worst, std::fabs(residual));
  }
  return worst;
}

} // namespace fbmsde::sde
