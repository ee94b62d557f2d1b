#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fbmsde/stats.hpp"

using namespace fbmsde;

TEST_CASE("moments of a known sample") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  CHECK(stats::mean(x) == 2.5);
  CHECK(stats::variance(x) == doctest::Approx(5.0 / 3.0));
  const auto m = stats::moments(x);
  CHECK(m.mean == 2.5);
  CHECK(m.skewness == doctest::Approx(0.0));
}

TEST_CASE("l2 norm and its standard error") {
  const std::vector<double> x{3.0, 4.0};
  const auto est = stats::l2_norm(x);
  CHECK(est.value == doctest::Approx(std::sqrt(12.5)));
  CHECK(est.std_error > 0.0);
}

TEST_CASE("gaussian sample passes the fitted-normal KS test") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal(0.3, 2.0);
  std::vector<double> x(4000);
  for (auto& v : x) v = normal(rng);
  const auto ks = stats::ks_vs_fitted_normal(x);
  CHECK(ks.p_value > 0.01);

  // shifted exponential should fail badly
  std::exponential_distribution<double> expo(1.0);
  for (auto& v : x) v = expo(rng);
  CHECK(stats::ks_vs_fitted_normal(x).p_value < 1e-4);
}

TEST_CASE("two-sample KS separates distinct distributions") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> a(3000), b(3000), c(3000);
  for (auto& v : a) v = n01(rng);
  for (auto& v : b) v = n01(rng);
  for (auto& v : c) v = n01(rng) + 0.5;
  CHECK(stats::ks_two_sample(a, b).p_value > 0.01);
  CHECK(stats::ks_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("weighted least squares recovers an exact line") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 - 0.7 * x[i];
  const std::vector<double> w(x.size(), 4.0);
  const auto fit = stats::weighted_least_squares(x, y, w);
  CHECK(fit.slope == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.slope_std_error == doctest::Approx(std::sqrt(1.0 / 40.0)).epsilon(1e-12));
}

TEST_CASE("correlation of independent and dependent pairs") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<double> x(5000), y(5000), z(5000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = n01(rng);
    y[i] = n01(rng);
    z[i] = 0.8 * x[i] + 0.2 * n01(rng);
  }
  CHECK(std::fabs(stats::correlation(x, y)) < 0.05);
  CHECK(stats::correlation(x, z) > 0.9);
}
