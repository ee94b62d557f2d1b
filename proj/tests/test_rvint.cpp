#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fbmsde/fbm.hpp"
#include "fbmsde/fields.hpp"
#include "fbmsde/rng.hpp"
#include "fbmsde/rvint.hpp"
#include "fbmsde/stats.hpp"
#include "support/oracles.hpp"

using namespace fbmsde;
using rvint::SampledPath;

namespace {

SampledPath path_of(std::vector<double> v, double horizon = 1.0) {
  return SampledPath{horizon, std::move(v)};
}

} // namespace

TEST_CASE("measure order 1 is the half-half endpoint measure") {
  const auto nu = rvint::newton_cotes_measure(1);
  REQUIRE(nu.nodes.size() == 2);
  CHECK(nu.nodes[0] == 0.0);
  CHECK(nu.nodes[1] == 1.0);
  CHECK(nu.weights[0] == 0.5);
  CHECK(nu.weights[1] == 0.5);
}

TEST_CASE("orders 2 and 3 reproduce the classical composite weights") {
  {
    const auto nu = rvint::newton_cotes_measure(2);
    REQUIRE(nu.nodes.size() == 3);
    CHECK(nu.nodes[1] == 0.5);
    CHECK(nu.weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(nu.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(nu.weights[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  }
  {
    const auto nu = rvint::newton_cotes_measure(3);
    REQUIRE(nu.nodes.size() == 5);
    const double expected[] = {7.0 / 90.0, 16.0 / 45.0, 2.0 / 15.0, 16.0 / 45.0,
                               7.0 / 90.0};
    for (int j = 0; j < 5; ++j) {
      CHECK(nu.nodes[j] == doctest::Approx(j / 4.0).epsilon(1e-15));
      CHECK(std::fabs(nu.weights[j] - expected[j]) <= 1e-14);
    }
  }
}

TEST_CASE("weights match the independent quadrature oracle") {
  for (int m = 2; m <= 6; ++m) {
    const auto nu = rvint::newton_cotes_measure(m);
    for (std::size_t j = 0; j < nu.weights.size(); ++j) {
      const double oracle = oracles::lagrange_weight_by_quadrature(m, static_cast<int>(j));
      CHECK(std::fabs(nu.weights[j] - oracle) <= 1e-13);
    }
  }
  CHECK_THROWS_AS(rvint::newton_cotes_measure(0), DomainError);
  CHECK_THROWS_AS(rvint::newton_cotes_measure(7), DomainError);
}

TEST_CASE("measure matches Lebesgue moments up to degree 2m-1") {
  for (int m = 1; m <= 4; ++m) {
    const auto nu = rvint::newton_cotes_measure(m);
    for (int q = 0; q <= 2 * m - 1; ++q) {
      double moment = 0.0;
      for (std::size_t j = 0; j < nu.nodes.size(); ++j)
        moment += nu.weights[j] * std::pow(nu.nodes[j], q);
      CHECK(std::fabs(moment - 1.0 / (q + 1.0)) <= 1e-12);
    }
  }
}

TEST_CASE("symmetric integral telescopes for constants and squares") {
  const auto x = path_of({0.0, 0.7, 0.2, -0.4, 1.1});
  const auto ones = path_of({1.0, 1.0, 1.0, 1.0, 1.0});
  CHECK(rvint::symmetric_integral(ones, x) ==
        doctest::Approx(x.values.back() - x.values.front()).epsilon(1e-15));

  CHECK(rvint::symmetric_integral(x, x) ==
        doctest::Approx(0.5 * (1.1 * 1.1 - 0.0)).epsilon(1e-13));

  CHECK_THROWS_AS(rvint::symmetric_integral(path_of({0.0, 1.0}), x), DomainError);
}

TEST_CASE("symmetric integral is antisymmetric under path reversal") {
  const fbm::FbmPath b = fbm::generate_path(128, 1.0, HurstIndex(0.4), 5);
  std::vector<double> y(b.values), x(b.values);
  for (auto& v : y) v = std::cos(v);
  const double forward = rvint::symmetric_integral(path_of(y), path_of(x));
  std::vector<double> yr(y.rbegin(), y.rend()), xr(x.rbegin(), x.rend());
  const double backward = rvint::symmetric_integral(path_of(yr), path_of(xr));
  CHECK(backward == doctest::Approx(-forward).epsilon(1e-12));
}

TEST_CASE("change of variables for the symmetric integral, H = 0.6") {
  // integral of cos(B) dB recovers sin(B_T)
  const HurstIndex h(0.6);
  std::vector<double> residuals;
  for (int s = 0; s < 20; ++s) {
    const fbm::FbmPath b = fbm::generate_path(1 << 14, 1.0, h, path_seed(400, s));
    std::vector<double> cosb(b.values.size());
    for (std::size_t k = 0; k < cosb.size(); ++k) cosb[k] = std::cos(b.values[k]);
    const double integral =
        rvint::symmetric_integral(path_of(std::move(cosb)), path_of(b.values));
    residuals.push_back(integral - std::sin(b.values.back()));
  }
  CHECK(stats::l2_norm(residuals).value < 5e-3);
}

TEST_CASE("order-1 functional is exactly the symmetric integral") {
  const fbm::FbmPath b = fbm::generate_path(512, 1.0, HurstIndex(0.35), 9);
  const auto bpath = SampledPath::from_fbm(b);
  const VectorField cosf = VectorField::analytic(
      "cos", [](double v) { return std::cos(v); }, [](double v) { return -std::sin(v); });
  std::vector<double> cosb(b.values.size());
  for (std::size_t k = 0; k < cosb.size(); ++k) cosb[k] = std::cos(b.values[k]);
  CHECK(rvint::nc_functional(cosf, bpath, bpath, 1) ==
        rvint::symmetric_integral(path_of(std::move(cosb)), bpath));
}

TEST_CASE("constant integrand telescopes for every order") {
  const fbm::FbmPath b = fbm::generate_path(777, 1.0, HurstIndex(0.45), 13);
  const auto bpath = SampledPath::from_fbm(b);
  const VectorField one = fields::affine(1.0);
  for (int m = 1; m <= 6; ++m) {
    CHECK(rvint::nc_functional(one, bpath, bpath, m) ==
          doctest::Approx(b.values.back()).epsilon(1e-12));
  }
}

TEST_CASE("order-2 functional recovers the quintic antiderivative at H = 0.3") {
  const HurstIndex h(0.3);
  const auto f = fields::parse_integrand("monomial(4)");
  std::vector<double> residuals;
  for (int s = 0; s < 20; ++s) {
    const fbm::FbmPath b = fbm::generate_path(1 << 14, 1.0, h, path_seed(500, s));
    const auto bpath = SampledPath::from_fbm(b);
    residuals.push_back(rvint::nc_functional(f.f, bpath, bpath, 2) -
                        f.antiderivative(b.values.back()));
  }
  CHECK(stats::l2_norm(residuals).value < 0.02);
}

TEST_CASE("functional is linear in the integrand") {
  const fbm::FbmPath b = fbm::generate_path(256, 1.0, HurstIndex(0.5), 21);
  const auto bpath = SampledPath::from_fbm(b);
  const VectorField f = VectorField::from_eval_only("f", [](double v) { return std::sin(v) + v * v; });
  const VectorField g = VectorField::from_eval_only("g", [](double v) { return std::exp(-v * v); });
  const double alpha = 1.7, beta = -0.4;
  const VectorField combo = VectorField::from_eval_only(
      "combo", [=](double v) { return alpha * (std::sin(v) + v * v) + beta * std::exp(-v * v); });
  for (int m : {2, 3, 4}) {
    const double lhs = rvint::nc_functional(combo, bpath, bpath, m);
    const double rhs = alpha * rvint::nc_functional(f, bpath, bpath, m) +
                       beta * rvint::nc_functional(g, bpath, bpath, m);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("threshold indices") {
  CHECK(rvint::n_threshold(HurstIndex(0.5)) == 1);
  CHECK(rvint::n_threshold(HurstIndex(0.15)) == 2);
  CHECK(rvint::n_threshold(HurstIndex(0.09)) == 3);
  CHECK(rvint::m_threshold(HurstIndex(0.5)) == 1);
  CHECK(rvint::m_threshold(HurstIndex(0.3)) == 2);
  CHECK(rvint::m_threshold(HurstIndex(0.18)) == 3);
}

TEST_CASE("power sums: telescoping and the classical limits") {
  const fbm::FbmPath b = fbm::generate_path(300, 1.0, HurstIndex(0.3), 3);
  CHECK(rvint::power_sum(b, 1) == doctest::Approx(b.values.back()).epsilon(1e-12));

  {
    std::vector<double> sums;
    for (int s = 0; s < 100; ++s)
      sums.push_back(rvint::power_sum(
          fbm::generate_path(1 << 12, 1.0, HurstIndex(0.5), path_seed(600, s)), 2));
    CHECK(stats::mean(sums) == doctest::Approx(1.0).epsilon(0.05));
  }
  {
    std::vector<double> sums;
    for (int s = 0; s < 100; ++s)
      sums.push_back(rvint::power_sum(
          fbm::generate_path(1 << 12, 1.0, HurstIndex(0.25), path_seed(601, s)), 4));
    CHECK(stats::mean(sums) == doctest::Approx(3.0).epsilon(0.05));
  }
}

TEST_CASE("order-2 residual shrinks under refinement for smooth polynomials") {
  // fixed seed: the x^9 tails make the coarse-n L2 estimate noisy at 200 paths
  const auto f = fields::parse_integrand("monomial(9)");
  for (double hv : {0.3, 0.5}) {
    const HurstIndex h(hv);
    const int paths = 200;
    std::vector<std::int64_t> grid{1 << 9, 1 << 10, 1 << 11, 1 << 12, 1 << 13};
    std::vector<double> l2(grid.size(), 0.0);
    for (int s = 0; s < paths; ++s) {
      const fbm::FbmPath master = fbm::generate_path(1 << 14, 1.0, h, path_seed(42, s));
      const double target = f.antiderivative(master.values.back());
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto sub = SampledPath::from_fbm(master.restrict_to(grid[j]));
        const double r = rvint::nc_functional(f.f, sub, sub, 2) - target;
        l2[j] += r * r;
      }
    }
    for (std::size_t j = 1; j < grid.size(); ++j) CHECK(l2[j] < l2[j - 1]);
  }
}
