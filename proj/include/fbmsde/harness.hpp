#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fbmsde/sde.hpp"
#include "fbmsde/vector_field.hpp"

namespace fbmsde::mc {

enum class Scheme { euler, crank_nicholson };
enum class Reference { closed_flow, doss_sussmann, finest_grid };

std::string scheme_name(Scheme s);
std::string reference_name(Reference r);

/// One Monte Carlo rate experiment: scheme vs reference coupled on the same
/// driving paths. Each scheme resolution n uses the n-grid restriction of a
/// fine master path (2x the largest n; 4x for the finest-grid reference).
struct ExperimentConfig {
  explicit ExperimentConfig(sde::SdeProblem p) : problem(std::move(p)) {}

  sde::SdeProblem problem;
  std::vector<std::int64_t> n_grid; // strictly increasing powers of two
  int paths_per_n = 2;
  std::uint64_t base_seed = 0;
  Scheme scheme = Scheme::euler;
  Reference reference = Reference::closed_flow;
  double ode_tol = 1e-10;      // per-point flow tolerance
  double reference_tol = 1e-12; // endpoint reference tolerance

  void validate() const;
};

struct PerNError {
  std::int64_t n = 0;
  double l2_error = 0.0;
  double std_error = 0.0;
  std::int64_t discards = 0;
};

struct RateEstimate {
  std::vector<PerNError> per_n;
  double slope = 0.0;
  double slope_halfwidth = 0.0;
  double discard_fraction = 0.0;
  bool degenerate = false;       // an exact-zero error level; slope undefined
  bool self_referential = false; // finest-grid reference
};

/// L2 error curve and fitted log2-log2 slope (weighted least squares, the
/// smallest n dropped as pre-asymptotic). Throws ExperimentError when more
/// than 1% of scheme runs fail.
RateEstimate l2_error_curve(const ExperimentConfig& config);

/// Scaled-error limit check for the Euler scheme at H > 1/2 with zero drift
/// on [0,1]: compares n^(2H-1)(Euler_1 - X_1) against the pathwise
/// prediction -sigma(X_1)/2 * trapezoid of sigma'(X_s). Returns the distance
/// at the two largest n of the grid.
struct EulerLimitPoint {
  std::int64_t n = 0;
  double distance = 0.0;
  double prediction_norm = 0.0;
};
std::vector<EulerLimitPoint> euler_limit_check(const ExperimentConfig& config);

enum class PowerVerdict { converges_to_zero, converges_to_constant, diverges, inconclusive };
std::string verdict_name(PowerVerdict v);

/// Convergence proxy on per-n statistics of a scalar path statistic:
/// means within noise of zero (or of each other) with non-increasing
/// variance read as convergence; variance doubling from the smallest to the
/// largest n reads as divergence.
struct PowerSumEntry {
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;
};
PowerVerdict decide_power_verdict(const std::vector<PowerSumEntry>& per_n);

struct PowerSumStudy {
  int p = 0;
  double hurst = 0.0;
  std::vector<PowerSumEntry> per_n;
  PowerVerdict verdict = PowerVerdict::inconclusive;
  double limit_estimate = 0.0;
  std::uint64_t base_seed = 0;
  int paths_per_n = 0;
};
PowerSumStudy power_sum_study(HurstIndex h, int p, std::vector<std::int64_t> n_grid,
                              int paths, std::uint64_t seed);

enum class SequenceVerdict { converges, non_convergent };
std::string verdict_name(SequenceVerdict v);

/// Monotone-decrease test on an L2 distance sequence; the first refinement
/// is ignored as pre-asymptotic.
SequenceVerdict decide_distance_verdict(const std::vector<double>& distances);

struct DistanceEntry {
  std::int64_t n = 0;
  double l2_error = 0.0;
  double std_error = 0.0;
  std::int64_t discards = 0;
};

struct BarrierPerH {
  double hurst = 0.0;
  std::vector<DistanceEntry> per_n;
  SequenceVerdict verdict = SequenceVerdict::non_convergent;
};

struct BarrierReport {
  double x0 = 1.0;
  std::vector<BarrierPerH> per_h;
  std::uint64_t base_seed = 0;
  std::vector<std::int64_t> n_grid;
  int paths_per_n = 0;
};

/// Implicit-midpoint convergence barrier for sigma(x) = x: per Hurst index,
/// L2 distance of the scheme endpoint to x0 * exp(B_1) over a grid of n.
BarrierReport cn_barrier_study(double x0, const std::vector<double>& h_list,
                               std::vector<std::int64_t> n_grid, int paths,
                               std::uint64_t seed);

struct ItoFormulaReport {
  double hurst = 0.0;
  int order = 1;
  std::vector<DistanceEntry> per_n;
  SequenceVerdict verdict = SequenceVerdict::non_convergent;
  std::uint64_t base_seed = 0;
  int paths_per_n = 0;
};

/// Change-of-variables residual study: L2 norm of
/// NC_m(f, B, B) - (F(B_T) - F(0)) per n.
ItoFormulaReport ito_formula_study(const VectorField& f,
                                   const std::function<double(double)>& antiderivative,
                                   HurstIndex h, int m, std::vector<std::int64_t> n_grid,
                                   int paths, std::uint64_t seed);

struct LawReport {
  double alpha = 0.0;
  double hurst = 0.0;
  std::int64_t n = 0;
  int paths = 0;
  std::uint64_t base_seed = 0;
  bool degenerate = false;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ks_p_value = 0.0;
  double variance = 0.0;
  double correlation_abs_vs_limit = 0.0;
  std::int64_t skipped = 0; // samples with |sigma(X_1)| at zero
  std::vector<double> samples;
};

/// Distributional diagnostics of the scaled implicit-midpoint error
/// n^(3H-1/2)(X^_1 - X_1) / ((alpha/12) sigma(X_1)) for quadratic sigma^2.
/// alpha = 0 is reported as degenerate (the prefactor vanishes).
LawReport cn_asymptotic_law_study(const QuadraticSigmaSquared& qss, double x0,
                                  HurstIndex h, std::int64_t n, int paths,
                                  std::uint64_t seed);

} // namespace fbmsde::mc
