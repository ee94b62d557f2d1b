#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fbmsde/kernels.hpp"

using namespace fbmsde;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 31, 64, 1000, 1001};

} // namespace

TEST_CASE("scalar kernels compute the obvious sums") {
  const std::vector<double> v{1.0, 2.0, 3.0};
  const auto& k = kernels::scalar_table();
  CHECK(k.sum(v) == 6.0);
  CHECK(k.dot(v, v) == 14.0);
  CHECK(k.power_sum(v, 2) == 14.0);
  CHECK(k.power_sum(v, 3) == 36.0);
  CHECK(k.max_abs_pow(v, 2) == 9.0);

  const std::vector<double> x{0.0, 1.0, 3.0};
  const std::vector<double> ones{1.0, 1.0, 1.0};
  CHECK(k.symmetric_sum(ones, x) == 3.0); // telescopes to x_n - x_0
  std::vector<double> d(2);
  k.adjacent_diff(x, d);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 2.0);
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!kernels::avx2_supported()) {
    MESSAGE("AVX2 not available; dispatch falls back to scalar");
    return;
  }
  const auto& s = kernels::scalar_table();
  const auto& a = kernels::avx2_table();

  for (std::size_t n : kLengths) {
    const auto x = random_vector(n, 11 + n);
    const auto y = random_vector(n, 23 + n);

    const double tol = 1e-13 * (1.0 + static_cast<double>(n));
    CHECK(std::fabs(s.sum(x) - a.sum(x)) <= tol);
    CHECK(std::fabs(s.dot(x, y) - a.dot(x, y)) <= tol);
    CHECK(std::fabs(s.l2_diff_sq(x, y) - a.l2_diff_sq(x, y)) <= tol);
    for (int p = 1; p <= 6; ++p) {
      CHECK(std::fabs(s.power_sum(x, p) - a.power_sum(x, p)) <= tol);
      // per-element work is identical and max is exact, so bit equality holds
      CHECK(s.max_abs_pow(x, p) == a.max_abs_pow(x, p));
    }
    if (n >= 2) {
      CHECK(std::fabs(s.symmetric_sum(y, x) - a.symmetric_sum(y, x)) <= tol);
      std::vector<double> ds(n - 1), da(n - 1);
      s.adjacent_diff(x, ds);
      a.adjacent_diff(x, da);
      CHECK(ds == da);
    }
  }
}

TEST_CASE("backend dispatch can be forced and reset") {
  kernels::force_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  CHECK(kernels::backend_name(kernels::active_backend()) == "scalar");
  if (kernels::avx2_supported()) {
    kernels::force_backend(kernels::Backend::avx2);
    CHECK(kernels::active_backend() == kernels::Backend::avx2);
  }
  kernels::reset_backend();
}
