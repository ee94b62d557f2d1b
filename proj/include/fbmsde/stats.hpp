#pragma once

#include <span>
#include <vector>

namespace fbmsde::stats {

struct Moments {
  double mean = 0.0;
  double variance = 0.0; // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

double mean(std::span<const double> x);
double variance(std::span<const double> x); // unbiased, needs >= 2 samples
Moments moments(std::span<const double> x);

/// sqrt(mean of squares) together with the delta-method standard error of
/// the root-mean-square estimate.
struct L2Estimate {
  double value = 0.0;
  double std_error = 0.0;
};
L2Estimate l2_norm(std::span<const double> x);

double correlation(std::span<const double> x, std::span<const double> y);

/// Survival function of the Kolmogorov distribution,
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// Two-sample Kolmogorov-Smirnov test; returns the asymptotic p-value.
struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample KS against a normal with mean/stddev fitted from the data.
/// The p-value uses the plain asymptotic law (conservative diagnostics only).
KsResult ks_vs_fitted_normal(std::vector<double> x);

/// Weighted least squares fit y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
};
LineFit weighted_least_squares(std::span<const double> x, std::span<const double> y,
                               std::span<const double> weights);

} // namespace fbmsde::stats
