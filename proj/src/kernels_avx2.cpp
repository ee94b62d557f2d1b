#include "fbmsde/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define FBMSDE_HAVE_AVX2_TU 1
#include <immintrin.h>
#else
#define FBMSDE_HAVE_AVX2_TU 0
#endif

namespace fbmsde::kernels {

#if FBMSDE_HAVE_AVX2_TU

#define FBMSDE_AVX2 __attribute__((target("avx2,fma")))

namespace {

// Per-element arithmetic mirrors the scalar kernels exactly; only the
// reduction order differs (four partial accumulators folded at the end).

FBMSDE_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

FBMSDE_AVX2 inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  const double a = _mm_cvtsd_f64(lo);
  const double b = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
  return a > b ? a : b;
}

FBMSDE_AVX2 inline __m256d pow_int_v(__m256d x, int p) {
  __m256d r = x;
  for (int i = 1; i < p; ++i) r = _mm256_mul_pd(r, x);
  return r;
}

inline double pow_int(double x, int p) {
  double r = x;
  for (int i = 1; i < p; ++i) r *= x;
  return r;
}

FBMSDE_AVX2 double sum_avx2(std::span<const double> a) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a.data() + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

FBMSDE_AVX2 double dot_avx2(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(a.data() + i),
                                           _mm256_loadu_pd(b.data() + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

FBMSDE_AVX2 double l2_diff_sq_avx2(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i),
                                    _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

FBMSDE_AVX2 double power_sum_avx2(std::span<const double> d, int p) {
  const std::size_t n = d.size();
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, pow_int_v(_mm256_loadu_pd(d.data() + i), p));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += pow_int(d[i], p);
  return s;
}

FBMSDE_AVX2 double max_abs_pow_avx2(std::span<const double> d, int p) {
  const std::size_t n = d.size();
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_and_pd(_mm256_loadu_pd(d.data() + i), abs_mask);
    acc = _mm256_max_pd(acc, pow_int_v(v, p));
  }
  double m = hmax(acc);
  for (; i < n; ++i) {
    const double w = pow_int(std::fabs(d[i]), p);
    if (w > m) m = w;
  }
  return m;
}

FBMSDE_AVX2 double symmetric_sum_avx2(std::span<const double> y, std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const std::size_t n = x.size() - 1;
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t k = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; k + 4 <= n; k += 4) {
    const __m256d y0 = _mm256_loadu_pd(y.data() + k);
    const __m256d y1 = _mm256_loadu_pd(y.data() + k + 1);
    const __m256d x0 = _mm256_loadu_pd(x.data() + k);
    const __m256d x1 = _mm256_loadu_pd(x.data() + k + 1);
    const __m256d mid = _mm256_mul_pd(half, _mm256_add_pd(y1, y0));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(mid, _mm256_sub_pd(x1, x0)));
  }
  double s = hsum(acc);
  for (; k < n; ++k) s += 0.5 * (y[k + 1] + y[k]) * (x[k + 1] - x[k]);
  return s;
}

FBMSDE_AVX2 void adjacent_diff_avx2(std::span<const double> v, std::span<double> out) {
  if (v.size() < 2) return;
  const std::size_t n = v.size() - 1;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = _mm256_loadu_pd(v.data() + k);
    const __m256d b = _mm256_loadu_pd(v.data() + k + 1);
    _mm256_storeu_pd(out.data() + k, _mm256_sub_pd(b, a));
  }
  for (; k < n; ++k) out[k] = v[k + 1] - v[k];
}

} // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }

const KernelTable& avx2_table() {
  static const KernelTable table{
      sum_avx2,         dot_avx2,           l2_diff_sq_avx2,
      power_sum_avx2,   max_abs_pow_avx2,   symmetric_sum_avx2,
      adjacent_diff_avx2,
  };
  return table;
}

#else // !FBMSDE_HAVE_AVX2_TU

bool avx2_supported() { return false; }
const KernelTable& avx2_table() { return scalar_table(); }

#endif

} // namespace fbmsde::kernels
