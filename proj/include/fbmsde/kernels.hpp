#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace fbmsde::kernels {

/// Data-parallel inner loops used by the path estimators and the Monte Carlo
/// statistics. Every operation has a scalar reference implementation and an
/// AVX2 variant; the backend is selected once at startup (CPU detection,
/// overridable through the FBMSDE_SIMD environment variable) and the two are
/// equivalence-tested against each other.
enum class Backend { scalar, avx2 };

struct KernelTable {
  double (*sum)(std::span<const double>);
  double (*dot)(std::span<const double>, std::span<const double>);
  // sum of (a[i]-b[i])^2
  double (*l2_diff_sq)(std::span<const double>, std::span<const double>);
  // sum of d[i]^p for small integer p >= 1
  double (*power_sum)(std::span<const double>, int p);
  // max over i of |d[i]|^p
  double (*max_abs_pow)(std::span<const double>, int p);
  // sum over k of (y[k+1]+y[k])/2 * (x[k+1]-x[k]); y and x hold n+1 samples
  double (*symmetric_sum)(std::span<const double>, std::span<const double>);
  // out[k] = v[k+1] - v[k]
  void (*adjacent_diff)(std::span<const double> v, std::span<double> out);
};

const KernelTable& scalar_table();
const KernelTable& avx2_table();
bool avx2_supported();

/// Active backend. Resolution order: forced value, FBMSDE_SIMD environment
/// variable ("scalar", "avx2", "auto"), then CPU detection.
Backend active_backend();
std::string backend_name(Backend b);
/// Force a backend (used by tests and by manifest replay for bit-stable
/// reproduction). Throws DomainError if AVX2 is requested but unsupported.
void force_backend(Backend b);
void reset_backend();

const KernelTable& active();

inline double sum(std::span<const double> a) { return active().sum(a); }
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a, b);
}
inline double l2_diff_sq(std::span<const double> a, std::span<const double> b) {
  return active().l2_diff_sq(a, b);
}
inline double power_sum(std::span<const double> d, int p) {
  return active().power_sum(d, p);
}
inline double max_abs_pow(std::span<const double> d, int p) {
  return active().max_abs_pow(d, p);
}
inline double symmetric_sum(std::span<const double> y, std::span<const double> x) {
  return active().symmetric_sum(y, x);
}
inline void adjacent_diff(std::span<const double> v, std::span<double> out) {
  active().adjacent_diff(v, out);
}

} // namespace fbmsde::kernels
