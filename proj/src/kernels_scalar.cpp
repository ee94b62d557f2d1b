#include "fbmsde/kernels.hpp"

#include <cmath>

namespace fbmsde::kernels {
namespace {

inline double pow_int(double x, int p) {
  double r = x;
  for (int i = 1; i < p; ++i) r *= x;
  return r;
}

double sum_scalar(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_diff_sq_scalar(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double power_sum_scalar(std::span<const double> d, int p) {
  double s = 0.0;
  for (double v : d) s += pow_int(v, p);
  return s;
}

double max_abs_pow_scalar(std::span<const double> d, int p) {
  double m = 0.0;
  for (double v : d) {
    const double w = pow_int(std::fabs(v), p);
    if (w > m) m = w;
  }
  return m;
}

double symmetric_sum_scalar(std::span<const double> y, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    s += 0.5 * (y[k + 1] + y[k]) * (x[k + 1] - x[k]);
  }
  return s;
}

void adjacent_diff_scalar(std::span<const double> v, std::span<double> out) {
  for (std::size_t k = 0; k + 1 < v.size(); ++k) out[k] = v[k + 1] - v[k];
}

} // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      sum_scalar,         dot_scalar,           l2_diff_sq_scalar,
      power_sum_scalar,   max_abs_pow_scalar,   symmetric_sum_scalar,
      adjacent_diff_scalar,
  };
  return table;
}

} // namespace fbmsde::kernels
