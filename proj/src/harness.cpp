#include "fbmsde/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbmsde/fields.hpp"
#include "fbmsde/parallel.hpp"
#include "fbmsde/rng.hpp"
#include "fbmsde/rvint.hpp"
#include "fbmsde/stats.hpp"

namespace fbmsde::mc {
namespace {

constexpr double kDiscardBudget = 0.01;
// slack on "non-increasing variance": the per-n variances are estimates
constexpr double kVarianceSlack = 1.05;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

void validate_grid(const std::vector<std::int64_t>& n_grid) {
  if (n_grid.empty()) throw DomainError("n_grid must not be empty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (!is_power_of_two(n_grid[i]))
      throw DomainError("n_grid entries must be powers of two");
    if (i > 0 && n_grid[i] <= n_grid[i - 1])
      throw DomainError("n_grid must be strictly increasing");
  }
}

double run_scheme_endpoint(Scheme scheme, const sde::SdeProblem& problem,
                           const fbm::FbmPath& path) {
  switch (scheme) {
    case Scheme::euler:
      return sde::euler_scheme(problem, path).values.back();
    case Scheme::crank_nicholson:
      return sde::crank_nicholson_scheme(problem, path).values.back();
  }
  throw DomainError("unknown scheme");
}

struct ColumnStats {
  double l2 = 0.0;
  double se = 0.0;
  std::int64_t discards = 0;
};

// L2 statistics of one per-n column; NaN marks a discarded path.
ColumnStats column_l2(const std::vector<double>& column) {
  std::vector<double> kept;
  kept.reserve(column.size());
  std::int64_t discards = 0;
  for (double v : column) {
    if (std::isnan(v))
      ++discards;
    else
      kept.push_back(v);
  }
  if (kept.empty()) throw ExperimentError("all paths were discarded at one grid size");
  const stats::L2Estimate est = stats::l2_norm(kept);
  return {est.value, est.std_error, discards};
}

struct SlopeFit {
  double slope = 0.0;
  double halfwidth = 0.0;
  bool degenerate = false;
};

// Weighted log2-log2 fit; drops the smallest n as pre-asymptotic.
SlopeFit fit_slope(const std::vector<PerNError>& per_n) {
  std::vector<double> x, y, w;
  for (std::size_t i = per_n.size() >= 3 ? 1 : 0; i < per_n.size(); ++i) {
    const auto& e = per_n[i];
    if (e.l2_error <= 0.0) return {kNaN, kNaN, true};
    const double se_log = std::max(e.std_error / (e.l2_error * std::log(2.0)), 1e-9);
    x.push_back(std::log2(static_cast<double>(e.n)));
    y.push_back(std::log2(e.l2_error));
    w.push_back(1.0 / (se_log * se_log));
  }
  if (x.size() < 2) return {kNaN, kNaN, true};
  const stats::LineFit fit = stats::weighted_least_squares(x, y, w);
  return {fit.slope, 1.96 * fit.slope_std_error, false};
}

} // namespace

std::string scheme_name(Scheme s) {
  return s == Scheme::euler ? "euler" : "crank_nicholson";
}

std::string reference_name(Reference r) {
  switch (r) {
    case Reference::closed_flow: return "closed_flow";
    case Reference::doss_sussmann: return "doss_sussmann";
    case Reference::finest_grid: return "finest_grid";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  validate_grid(n_grid);
  if (paths_per_n < 2) throw DomainError("paths_per_n must be at least 2");
  if (scheme == Scheme::crank_nicholson && !problem.zero_drift())
    throw ModelError("the implicit midpoint scheme is defined for zero drift only");
  if (reference == Reference::closed_flow && !problem.zero_drift())
    throw ModelError("the closed-flow reference requires zero drift");
}

RateEstimate l2_error_curve(const ExperimentConfig& config) {
  config.validate();
  const auto& grid = config.n_grid;
  const std::int64_t n_master = (config.reference == Reference::finest_grid ? 4 : 2) *
                                grid.back();
  const int paths = config.paths_per_n;
  const std::size_t cols = grid.size();

  // errors[i*cols + j] = scheme endpoint error of path i at grid[j]
  std::vector<double> errors(static_cast<std::size_t>(paths) * cols, kNaN);

  parallel_for_paths(paths, [&](std::int64_t i) {
    const fbm::FbmPath master =
        fbm::generate_path(n_master, config.problem.T, config.problem.hurst,
                           path_seed(config.base_seed, static_cast<std::uint64_t>(i)));
    double reference = 0.0;
    switch (config.reference) {
      case Reference::closed_flow:
        reference = flows::flow(config.problem.x0, master.values.back(),
                                config.problem.sigma,
                                flows::flow_options(config.reference_tol));
        break;
      case Reference::doss_sussmann:
        reference =
            sde::solve_doss_sussmann(config.problem, master, config.reference_tol)
                .values.back();
        break;
      case Reference::finest_grid:
        reference = sde::crank_nicholson_scheme(config.problem, master).values.back();
        break;
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const fbm::FbmPath sub = master.restrict_to(grid[j]);
      try {
        errors[static_cast<std::size_t>(i) * cols + j] =
            run_scheme_endpoint(config.scheme, config.problem, sub) - reference;
      } catch (const SchemeStepError&) {
        // left as NaN: discarded and counted
      }
    }
  });

  RateEstimate out;
  out.self_referential = config.reference == Reference::finest_grid;
  std::int64_t total_discards = 0;
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> column(paths);
    for (int i = 0; i < paths; ++i)
      column[static_cast<std::size_t>(i)] = errors[static_cast<std::size_t>(i) * cols + j];
    const ColumnStats cs = column_l2(column);
    out.per_n.push_back({grid[j], cs.l2, cs.se, cs.discards});
    total_discards += cs.discards;
  }
  out.discard_fraction = static_cast<double>(total_discards) /
                         static_cast<double>(static_cast<std::int64_t>(paths) *
                                             static_cast<std::int64_t>(cols));
  if (out.discard_fraction > kDiscardBudget)
    throw ExperimentError("discard fraction " + std::to_string(out.discard_fraction) +
                          " exceeds the 1% budget");
  const SlopeFit fit = fit_slope(out.per_n);
  out.slope = fit.slope;
  out.slope_halfwidth = fit.halfwidth;
  out.degenerate = fit.degenerate;
  return out;
}

std::vector<EulerLimitPoint> euler_limit_check(const ExperimentConfig& config) {
  config.validate();
  if (!config.problem.zero_drift())
    throw DomainError("the Euler limit check needs zero drift");
  if (!(config.problem.hurst.value() > 0.5))
    throw DomainError("the Euler limit check needs H > 1/2");
  if (config.problem.T != 1.0)
    throw DomainError("the Euler limit check is normalized to horizon 1");

  std::vector<std::int64_t> ns;
  if (config.n_grid.size() >= 2) ns.push_back(config.n_grid[config.n_grid.size() - 2]);
  ns.push_back(config.n_grid.back());

  const std::int64_t n_master = 2 * config.n_grid.back();
  const int paths = config.paths_per_n;
  const double two_h_minus_1 = 2.0 * config.problem.hurst.value() - 1.0;

  // per path and n: (scaled error, prediction)
  std::vector<double> scaled(static_cast<std::size_t>(paths) * ns.size());
  std::vector<double> predicted(static_cast<std::size_t>(paths) * ns.size());

  const flows::FlowOptions path_opt = flows::flow_options(config.ode_tol);
  parallel_for_paths(paths, [&](std::int64_t i) {
    const fbm::FbmPath master =
        fbm::generate_path(n_master, 1.0, config.problem.hurst,
                           path_seed(config.base_seed, static_cast<std::uint64_t>(i)));
    for (std::size_t j = 0; j < ns.size(); ++j) {
      const fbm::FbmPath sub = master.restrict_to(ns[j]);
      const double euler_end = sde::euler_scheme(config.problem, sub).values.back();
      const sde::SolutionPath exact = sde::solve_zero_drift(config.problem, sub, path_opt);
      const double x1 = exact.values.back();
      const double dt = 1.0 / static_cast<double>(ns[j]);
      double trap = 0.0;
      for (std::size_t k = 0; k + 1 < exact.values.size(); ++k)
        trap += 0.5 * (config.problem.sigma.derivative(1, exact.values[k]) +
                       config.problem.sigma.derivative(1, exact.values[k + 1])) * dt;
      const std::size_t idx = static_cast<std::size_t>(i) * ns.size() + j;
      scaled[idx] = std::pow(static_cast<double>(ns[j]), two_h_minus_1) *
                    (euler_end - x1);
      // D_s X_1 = sigma(X_1) for the zero-drift closed form
      predicted[idx] = -0.5 * config.problem.sigma(x1) * trap;
    }
  });

  std::vector<EulerLimitPoint> out;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    std::vector<double> gap(paths), pred(paths);
    for (int i = 0; i < paths; ++i) {
      const std::size_t idx = static_cast<std::size_t>(i) * ns.size() + j;
      gap[static_cast<std::size_t>(i)] = scaled[idx] - predicted[idx];
      pred[static_cast<std::size_t>(i)] = predicted[idx];
    }
    out.push_back({ns[j], stats::l2_norm(gap).value, stats::l2_norm(pred).value});
  }
  return out;
}

std::string verdict_name(PowerVerdict v) {
  switch (v) {
    case PowerVerdict::converges_to_zero: return "converges_to_zero";
    case PowerVerdict::converges_to_constant: return "converges_to_constant";
    case PowerVerdict::diverges: return "diverges";
    case PowerVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string verdict_name(SequenceVerdict v) {
  return v == SequenceVerdict::converges ? "converges" : "non-convergent";
}

PowerVerdict decide_power_verdict(const std::vector<PowerSumEntry>& per_n) {
  if (per_n.size() < 3) return PowerVerdict::inconclusive;
  const auto& a = per_n[per_n.size() - 3];
  const auto& b = per_n[per_n.size() - 2];
  const auto& c = per_n[per_n.size() - 1];
  const bool variance_nonincreasing =
      b.variance <= a.variance * kVarianceSlack && c.variance <= b.variance * kVarianceSlack;

  auto within = [](double delta, double se) { return std::fabs(delta) < 3.0 * se; };
  const bool means_zero = within(a.mean, a.std_error) && within(b.mean, b.std_error) &&
                          within(c.mean, c.std_error);
  if (means_zero && variance_nonincreasing) return PowerVerdict::converges_to_zero;

  auto pooled = [](const PowerSumEntry& u, const PowerSumEntry& v) {
    return std::sqrt(u.std_error * u.std_error + v.std_error * v.std_error);
  };
  const bool means_stable = within(a.mean - b.mean, pooled(a, b)) &&
                            within(b.mean - c.mean, pooled(b, c)) &&
                            within(a.mean - c.mean, pooled(a, c));
  if (means_stable && variance_nonincreasing) return PowerVerdict::converges_to_constant;

  if (per_n.back().variance > 2.0 * per_n.front().variance) return PowerVerdict::diverges;
  return PowerVerdict::inconclusive;
}

SequenceVerdict decide_distance_verdict(const std::vector<double>& distances) {
  if (distances.size() < 3) return SequenceVerdict::non_convergent;
  for (std::size_t i = 2; i < distances.size(); ++i) {
    if (!(distances[i] < distances[i - 1])) return SequenceVerdict::non_convergent;
  }
  return SequenceVerdict::converges;
}

PowerSumStudy power_sum_study(HurstIndex h, int p, std::vector<std::int64_t> n_grid,
                              int paths, std::uint64_t seed) {
  if (p < 2) throw DomainError("the power-sum study needs p >= 2");
  validate_grid(n_grid);
  if (paths < 2) throw DomainError("the power-sum study needs at least 2 paths");

  const std::int64_t n_master = 2 * n_grid.back();
  const std::size_t cols = n_grid.size();
  std::vector<double> sums(static_cast<std::size_t>(paths) * cols);

  parallel_for_paths(paths, [&](std::int64_t i) {
    const fbm::FbmPath master = fbm::generate_path(
        n_master, 1.0, h, path_seed(seed, static_cast<std::uint64_t>(i)));
    for (std::size_t j = 0; j < cols; ++j) {
      const fbm::FbmPath sub = master.restrict_to(n_grid[j]);
      sums[static_cast<std::size_t>(i) * cols + j] = rvint::power_sum(sub, p);
    }
  });

  PowerSumStudy out;
  out.p = p;
  out.hurst = h.value();
  out.base_seed = seed;
  out.paths_per_n = paths;
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> column(paths);
    for (int i = 0; i < paths; ++i)
      column[static_cast<std::size_t>(i)] = sums[static_cast<std::size_t>(i) * cols + j];
    PowerSumEntry e;
    e.n = n_grid[j];
    e.mean = stats::mean(column);
    e.variance = stats::variance(column);
    e.std_error = std::sqrt(e.variance / static_cast<double>(paths));
    out.per_n.push_back(e);
  }
  out.verdict = decide_power_verdict(out.per_n);
  out.limit_estimate = out.per_n.back().mean;
  return out;
}

BarrierReport cn_barrier_study(double x0, const std::vector<double>& h_list,
                               std::vector<std::int64_t> n_grid, int paths,
                               std::uint64_t seed) {
  if (h_list.empty()) throw DomainError("the barrier study needs at least one H");
  validate_grid(n_grid);
  if (paths < 2) throw DomainError("the barrier study needs at least 2 paths");

  sde::SdeProblem problem{fields::linear(), std::nullopt, x0, 1.0, HurstIndex(0.5)};
  const std::int64_t n_master = 2 * n_grid.back();
  const std::size_t cols = n_grid.size();

  BarrierReport report;
  report.x0 = x0;
  report.base_seed = seed;
  report.n_grid = n_grid;
  report.paths_per_n = paths;

  for (std::size_t hi = 0; hi < h_list.size(); ++hi) {
    const HurstIndex h(h_list[hi]);
    problem.hurst = h;
    std::vector<double> errors(static_cast<std::size_t>(paths) * cols, kNaN);
    parallel_for_paths(paths, [&](std::int64_t i) {
      const std::uint64_t global = static_cast<std::uint64_t>(hi) *
                                       static_cast<std::uint64_t>(paths) +
                                   static_cast<std::uint64_t>(i);
      const fbm::FbmPath master = fbm::generate_path(n_master, 1.0, h, path_seed(seed, global));
      const double reference = x0 * std::exp(master.values.back());
      for (std::size_t j = 0; j < cols; ++j) {
        const fbm::FbmPath sub = master.restrict_to(n_grid[j]);
        try {
          errors[static_cast<std::size_t>(i) * cols + j] =
              sde::crank_nicholson_scheme(problem, sub).values.back() - reference;
        } catch (const SchemeStepError&) {
        }
      }
    });

    BarrierPerH per_h;
    per_h.hurst = h.value();
    std::vector<double> distances;
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<double> column(paths);
      for (int i = 0; i < paths; ++i)
        column[static_cast<std::size_t>(i)] =
            errors[static_cast<std::size_t>(i) * cols + j];
      const ColumnStats cs = column_l2(column);
      per_h.per_n.push_back({n_grid[j], cs.l2, cs.se, cs.discards});
      distances.push_back(cs.l2);
    }
    per_h.verdict = decide_distance_verdict(distances);
    report.per_h.push_back(std::move(per_h));
  }
  return report;
}

ItoFormulaReport ito_formula_study(const VectorField& f,
                                   const std::function<double(double)>& antiderivative,
                                   HurstIndex h, int m, std::vector<std::int64_t> n_grid,
                                   int paths, std::uint64_t seed) {
  if (m < 1 || m > 4) throw DomainError("the change-of-variables study supports m in 1..4");
  validate_grid(n_grid);
  if (paths < 2) throw DomainError("the study needs at least 2 paths");

  const std::int64_t n_master = 2 * n_grid.back();
  const std::size_t cols = n_grid.size();
  std::vector<double> residuals(static_cast<std::size_t>(paths) * cols);

  parallel_for_paths(paths, [&](std::int64_t i) {
    const fbm::FbmPath master = fbm::generate_path(
        n_master, 1.0, h, path_seed(seed, static_cast<std::uint64_t>(i)));
    const double target = antiderivative(master.values.back()) - antiderivative(0.0);
    for (std::size_t j = 0; j < cols; ++j) {
      const fbm::FbmPath sub = master.restrict_to(n_grid[j]);
      const rvint::SampledPath b = rvint::SampledPath::from_fbm(sub);
      residuals[static_cast<std::size_t>(i) * cols + j] =
          rvint::nc_functional(f, b, b, m) - target;
    }
  });

  ItoFormulaReport report;
  report.hurst = h.value();
  report.order = m;
  report.base_seed = seed;
  report.paths_per_n = paths;
  std::vector<double> distances;
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> column(paths);
    for (int i = 0; i < paths; ++i)
      column[static_cast<std::size_t>(i)] =
          residuals[static_cast<std::size_t>(i) * cols + j];
    const stats::L2Estimate est = stats::l2_norm(column);
    report.per_n.push_back({n_grid[j], est.value, est.std_error, 0});
    distances.push_back(est.value);
  }
  report.verdict = decide_distance_verdict(distances);
  return report;
}

LawReport cn_asymptotic_law_study(const QuadraticSigmaSquared& qss, double x0,
                                  HurstIndex h, std::int64_t n, int paths,
                                  std::uint64_t seed) {
  if (!(h.value() > 1.0 / 3.0 && h.value() < 0.5))
    throw DomainError("the asymptotic-law study needs H in (1/3, 1/2)");
  if (!is_power_of_two(n)) throw DomainError("n must be a power of two");
  if (paths < 8) throw DomainError("the law study needs at least 8 paths");

  VectorField sigma = qss.field();
  if (qss.beta == 0.0 && qss.gamma == 0.0 && qss.alpha == 1.0)
    sigma = fields::linear(); // exact one-step updates for the canonical case
  sde::SdeProblem problem{sigma, std::nullopt, x0, 1.0, h};

  LawReport report;
  report.alpha = qss.alpha;
  report.hurst = h.value();
  report.n = n;
  report.paths = paths;
  report.base_seed = seed;
  report.degenerate = qss.alpha == 0.0;

  const double rate = std::pow(static_cast<double>(n), 3.0 * h.value() - 0.5);
  std::vector<double> sample(paths, kNaN);
  std::vector<double> limits(paths, kNaN);
  const flows::FlowOptions ref_opt = flows::flow_options(1e-12);

  parallel_for_paths(paths, [&](std::int64_t i) {
    const fbm::FbmPath path =
        fbm::generate_path(n, 1.0, h, path_seed(seed, static_cast<std::uint64_t>(i)));
    const double x1 = flows::flow(x0, path.values.back(), problem.sigma, ref_opt);
    double scaled;
    try {
      scaled = rate * (sde::crank_nicholson_scheme(problem, path).values.back() - x1);
    } catch (const SchemeStepError&) {
      return; // discarded
    }
    if (report.degenerate) {
      sample[static_cast<std::size_t>(i)] = scaled;
    } else {
      const double prefactor = qss.alpha / 12.0 * problem.sigma(x1);
      if (std::fabs(prefactor) < 1e-12) return; // sigma(X_1) at zero
      sample[static_cast<std::size_t>(i)] = scaled / prefactor;
    }
    limits[static_cast<std::size_t>(i)] = x1;
  });

  std::vector<double> kept, kept_limits, kept_abs;
  for (int i = 0; i < paths; ++i) {
    if (std::isnan(sample[static_cast<std::size_t>(i)])) continue;
    kept.push_back(sample[static_cast<std::size_t>(i)]);
    kept_limits.push_back(limits[static_cast<std::size_t>(i)]);
    kept_abs.push_back(std::fabs(sample[static_cast<std::size_t>(i)]));
  }
  report.skipped = paths - static_cast<std::int64_t>(kept.size());
  if (kept.size() < 8) throw ExperimentError("too few usable samples in the law study");

  const stats::Moments mom = stats::moments(kept);
  report.skewness = mom.skewness;
  report.excess_kurtosis = mom.excess_kurtosis;
  report.variance = mom.variance;
  report.ks_p_value = stats::ks_vs_fitted_normal(kept).p_value;
  report.correlation_abs_vs_limit = stats::correlation(kept_abs, kept_limits);
  report.samples = std::move(kept);
  return report;
}

} // namespace fbmsde::mc
