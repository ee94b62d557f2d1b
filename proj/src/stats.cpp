#include "fbmsde/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fbmsde/errors.hpp"
#include "fbmsde/kernels.hpp"

namespace fbmsde::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw DomainError("mean of an empty sample");
  return kernels::sum(x) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("variance needs at least two samples");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

Moments moments(std::span<const double> x) {
  if (x.size() < 4) throw DomainError("moments need at least four samples");
  const double m = mean(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(x.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;
  Moments out;
  out.mean = m;
  out.variance = m2 * n / (n - 1.0);
  out.skewness = m3 / std::pow(m2, 1.5);
  out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return out;
}

L2Estimate l2_norm(std::span<const double> x) {
  if (x.empty()) throw DomainError("L2 norm of an empty sample");
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i];
  const double msq = mean(sq);
  L2Estimate out;
  out.value = std::sqrt(msq);
  if (x.size() >= 2 && msq > 0.0) {
    const double se_msq = std::sqrt(variance(sq) / static_cast<double>(x.size()));
    out.std_error = se_msq / (2.0 * out.value);
  }
  return out;
}

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("correlation needs two equal samples of size >= 2");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS test needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult out;
  out.statistic = d;
  out.p_value = kolmogorov_q(d * std::sqrt(na * nb / (na + nb)));
  return out;
}

KsResult ks_vs_fitted_normal(std::vector<double> x) {
  if (x.size() < 4) throw DomainError("KS-vs-normal needs at least four samples");
  const double m = mean(x);
  const double sd = std::sqrt(variance(x));
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  auto cdf = [&](double v) { return 0.5 * std::erfc(-(v - m) / (sd * std::sqrt(2.0))); };
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  KsResult out;
  out.statistic = d;
  out.p_value = kolmogorov_q(d * std::sqrt(n));
  return out;
}

LineFit weighted_least_squares(std::span<const double> x, std::span<const double> y,
                               std::span<const double> weights) {
  if (x.size() != y.size() || x.size() != weights.size() || x.size() < 2)
    throw DomainError("weighted least squares needs >= 2 aligned points");
  double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weights[i];
    if (!(w > 0.0)) throw DomainError("weights must be positive");
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
    swxx += w * x[i] * x[i];
    swxy += w * x[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  if (det == 0.0) throw DomainError("degenerate abscissae in least squares");
  LineFit fit;
  fit.slope = (sw * swxy - swx * swy) / det;
  fit.intercept = (swxx * swy - swx * swxy) / det;
  // with weights = 1/se_i^2 the slope variance is sw/det
  fit.slope_std_error = std::sqrt(sw / det);
  return fit;
}

} // namespace fbmsde::stats
