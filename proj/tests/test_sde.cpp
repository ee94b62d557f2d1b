#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fbmsde/fields.hpp"
#include "fbmsde/fbm.hpp"
#include "fbmsde/rng.hpp"
#include "fbmsde/sde.hpp"
#include "fbmsde/stats.hpp"

using namespace fbmsde;
using fbm::FbmPath;
using fbm::GeneratorTag;
using sde::SdeProblem;

namespace {

VectorField cos_field() {
  return VectorField::analytic(
      "cos-bounded", [](double x) { return 2.0 + std::cos(x); },
      [](double x) { return -std::sin(x); }, [](double x) { return -std::cos(x); },
      [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); });
}

VectorField half_decay() {
  return VectorField::analytic(
      "half-decay", [](double x) { return -0.5 * x; }, [](double) { return -0.5; },
      [](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; });
}

FbmPath manual_path(std::vector<double> values, double horizon = 1.0) {
  const auto n = static_cast<std::int64_t>(values.size()) - 1;
  return FbmPath{HurstIndex(0.5), horizon, n, std::move(values), 0,
                 GeneratorTag::circulant};
}

} // namespace

TEST_CASE("zero-drift closed form is the exponential for the identity field") {
  const FbmPath b = fbm::generate_path(512, 1.0, HurstIndex(0.5), 11);
  const SdeProblem problem{fields::linear(), std::nullopt, 1.0, 1.0, HurstIndex(0.5)};
  const auto x = sde::solve_zero_drift(problem, b);
  REQUIRE(x.values.size() == b.values.size());
  CHECK(x.values[0] == 1.0);
  for (std::size_t k = 0; k < x.values.size(); ++k)
    CHECK(x.values[k] == doctest::Approx(std::exp(b.values[k])).epsilon(1e-9));
}

TEST_CASE("zero-drift closed form: constant and zero fields") {
  const FbmPath b = fbm::generate_path(64, 1.0, HurstIndex(0.3), 5);
  {
    const SdeProblem problem{fields::affine(0.0), std::nullopt, 0.7, 1.0, HurstIndex(0.3)};
    for (double v : sde::solve_zero_drift(problem, b).values) CHECK(v == 0.7);
  }
  {
    const SdeProblem problem{fields::affine(1.5), std::nullopt, 0.7, 1.0, HurstIndex(0.3)};
    const auto x = sde::solve_zero_drift(problem, b);
    for (std::size_t k = 0; k < x.values.size(); ++k)
      CHECK(x.values[k] == doctest::Approx(0.7 + 1.5 * b.values[k]).epsilon(1e-11));
  }
}

TEST_CASE("zero-drift solver rejects drift that survives on the reachable range") {
  const FbmPath b = fbm::generate_path(64, 1.0, HurstIndex(0.5), 5);
  {
    const SdeProblem problem{fields::linear(), fields::affine(1.0), 1.0, 1.0,
                             HurstIndex(0.5)};
    CHECK_THROWS_AS(sde::solve_zero_drift(problem, b), ModelError);
  }
  {
    // b(x) = x does not vanish on the exponential's range (0, inf)
    const SdeProblem problem{fields::linear(), fields::linear(), 1.0, 1.0,
                             HurstIndex(0.5)};
    CHECK_THROWS_AS(sde::solve_zero_drift(problem, b), ModelError);
  }
}

TEST_CASE("drift-absorbing solver reduces to the zero-drift flow exactly") {
  const FbmPath b = fbm::generate_path(128, 1.0, HurstIndex(0.4), 19);
  const SdeProblem problem{cos_field(), std::nullopt, 0.2, 1.0, HurstIndex(0.4)};
  const auto direct = sde::solve_zero_drift(problem, b, flows::flow_options(1e-10));
  const auto doss = sde::solve_doss_sussmann(problem, b, 1e-10);
  CHECK(direct.values == doss.values);
}

TEST_CASE("additive diffusion with constant drift solves in closed form") {
  const FbmPath b = fbm::generate_path(128, 1.0, HurstIndex(0.45), 23);
  const double c = 0.8;
  const SdeProblem problem{fields::affine(1.0), fields::affine(c), -0.3, 1.0,
                           HurstIndex(0.45)};
  for (auto form : {sde::DossForm::two_parameter, sde::DossForm::shifted_flow}) {
    const auto x = sde::solve_doss_sussmann(problem, b, 1e-10, form);
    for (std::size_t k = 0; k < x.values.size(); ++k) {
      const double t = b.dt() * static_cast<double>(k);
      CHECK(x.values[k] ==
            doctest::Approx(-0.3 + b.values[k] + c * t).epsilon(1e-8));
    }
  }
}

TEST_CASE("linear diffusion with linear drift gives the drift-shifted exponential") {
  const SdeProblem problem{fields::linear(), fields::linear(), 1.0, 1.0,
                           HurstIndex(0.5)};
  for (int s = 0; s < 20; ++s) {
    const FbmPath b = fbm::generate_path(256, 1.0, HurstIndex(0.5), path_seed(37, s));
    const auto x = sde::solve_doss_sussmann(problem, b, 1e-9);
    CHECK(x.values.back() ==
          doctest::Approx(std::exp(b.values.back() + 1.0)).epsilon(1e-6));
  }
}

TEST_CASE("the two drift-absorbing forms agree") {
  const SdeProblem problem{cos_field(), half_decay(), 0.5, 1.0, HurstIndex(0.45)};
  for (int s = 0; s < 5; ++s) {
    const FbmPath b = fbm::generate_path(128, 1.0, HurstIndex(0.45), path_seed(91, s));
    const auto two = sde::solve_doss_sussmann(problem, b, 1e-10, sde::DossForm::two_parameter);
    const auto shifted =
        sde::solve_doss_sussmann(problem, b, 1e-10, sde::DossForm::shifted_flow);
    for (std::size_t k = 0; k < two.values.size(); ++k)
      CHECK(two.values[k] == doctest::Approx(shifted.values[k]).epsilon(1e-6));
  }
}

TEST_CASE("drift-absorbing residual shrinks under refinement") {
  const SdeProblem problem{cos_field(), half_decay(), 0.5, 1.0, HurstIndex(0.4)};
  const FbmPath master = fbm::generate_path(1 << 10, 1.0, HurstIndex(0.4), 3003);
  double previous = -1.0;
  for (std::int64_t n : {1 << 8, 1 << 9, 1 << 10}) {
    const FbmPath sub = master.restrict_to(n);
    const auto x = sde::solve_doss_sussmann(problem, sub, 1e-10);
    const double r = sde::residual_check(problem, x, sub, 1);
    if (previous >= 0.0) CHECK(r < previous);
    previous = r;
  }
}

TEST_CASE("euler scheme: degenerate and additive cases") {
  const FbmPath b = fbm::generate_path(256, 1.0, HurstIndex(0.7), 41);
  {
    const SdeProblem problem{fields::affine(0.0), std::nullopt, 1.1, 1.0, HurstIndex(0.7)};
    for (double v : sde::euler_scheme(problem, b).values) CHECK(v == 1.1);
  }
  {
    const SdeProblem problem{fields::affine(2.0), std::nullopt, 1.1, 1.0, HurstIndex(0.7)};
    const auto x = sde::euler_scheme(problem, b);
    for (std::size_t k = 0; k < x.values.size(); ++k)
      CHECK(x.values[k] == doctest::Approx(1.1 + 2.0 * b.values[k]).epsilon(1e-12));
  }
}

TEST_CASE("implicit midpoint scheme: exactness and the rational one-step update") {
  {
    const SdeProblem problem{fields::affine(2.0), std::nullopt, 1.1, 1.0, HurstIndex(0.5)};
    const FbmPath b = fbm::generate_path(256, 1.0, HurstIndex(0.5), 43);
    const auto x = sde::crank_nicholson_scheme(problem, b);
    for (std::size_t k = 0; k < x.values.size(); ++k)
      CHECK(x.values[k] == doctest::Approx(1.1 + 2.0 * b.values[k]).epsilon(1e-12));
  }
  {
    const double d = 0.37;
    const SdeProblem problem{fields::linear(), std::nullopt, 2.0, 1.0, HurstIndex(0.5)};
    const auto x = sde::crank_nicholson_scheme(problem, manual_path({0.0, d}));
    CHECK(x.values[1] == 2.0 * (1.0 + 0.5 * d) / (1.0 - 0.5 * d));
  }
}

TEST_CASE("implicit midpoint scheme: pole and drift rejection") {
  const SdeProblem linear_problem{fields::linear(), std::nullopt, 1.0, 1.0,
                                  HurstIndex(0.5)};
  CHECK_THROWS_AS(sde::crank_nicholson_scheme(linear_problem, manual_path({0.0, 2.4})),
                  SchemeStepError);
  try {
    sde::crank_nicholson_scheme(linear_problem, manual_path({0.0, 2.4}));
  } catch (const SchemeStepError& e) {
    CHECK(e.kind == SchemeStepError::Kind::pole);
    CHECK(e.step == 0);
  }

  const SdeProblem with_drift{fields::linear(), fields::affine(1.0), 1.0, 1.0,
                              HurstIndex(0.5)};
  const FbmPath b = fbm::generate_path(8, 1.0, HurstIndex(0.5), 1);
  CHECK_THROWS_AS(sde::crank_nicholson_scheme(with_drift, b), ModelError);
}

TEST_CASE("implicit midpoint scheme solves the step equation for smooth fields") {
  const VectorField sigma = VectorField::analytic(
      "sin-bounded", [](double x) { return 2.0 + std::sin(x); },
      [](double x) { return std::cos(x); });
  const SdeProblem problem{sigma, std::nullopt, 0.0, 1.0, HurstIndex(0.35)};
  const FbmPath b = fbm::generate_path(512, 1.0, HurstIndex(0.35), 47);
  const auto x = sde::crank_nicholson_scheme(problem, b, 1e-12);
  REQUIRE(x.solver_iterations.size() == 512);
  int max_iter = 0;
  for (std::size_t k = 0; k < 512; ++k) {
    const double d = b.values[k + 1] - b.values[k];
    const double g = x.values[k + 1] - x.values[k] -
                     0.5 * (sigma(x.values[k]) + sigma(x.values[k + 1])) * d;
    CHECK(std::fabs(g) <= 1e-11);
    max_iter = std::max(max_iter, x.solver_iterations[k]);
  }
  CHECK(max_iter >= 1);
  CHECK(max_iter <= 50);
}

TEST_CASE("implicit midpoint endpoint approaches the exponential limit") {
  const SdeProblem problem{fields::linear(), std::nullopt, 1.0, 1.0, HurstIndex(0.4)};
  std::vector<double> errors;
  for (int s = 0; s < 100; ++s) {
    const FbmPath b = fbm::generate_path(1 << 12, 1.0, HurstIndex(0.4), path_seed(55, s));
    errors.push_back(sde::crank_nicholson_scheme(problem, b).values.back() -
                     std::exp(b.values.back()));
  }
  CHECK(stats::l2_norm(errors).value < 1e-2);
}

TEST_CASE("integral-equation residual: additive exactness and ordering") {
  {
    const SdeProblem problem{fields::affine(1.0), std::nullopt, 0.4, 1.0, HurstIndex(0.5)};
    const FbmPath b = fbm::generate_path(256, 1.0, HurstIndex(0.5), 61);
    std::vector<double> vals(b.values.size());
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = 0.4 + b.values[k];
    const sde::SolutionPath exact{1.0, std::move(vals), sde::MethodTag::closed_flow, {}};
    CHECK(sde::residual_check(problem, exact, b, 1) <= 1e-12);
  }
  {
    const SdeProblem problem{fields::linear(), std::nullopt, 1.0, 1.0, HurstIndex(0.5)};
    const FbmPath master = fbm::generate_path(1 << 13, 1.0, HurstIndex(0.5), 63);
    double previous = -1.0;
    // residual decreases as n doubles (ratio well under 0.9)
    for (std::int64_t n : {1 << 10, 1 << 11, 1 << 12, 1 << 13}) {
      const FbmPath sub = master.restrict_to(n);
      const auto x = sde::solve_zero_drift(problem, sub);
      const double r = sde::residual_check(problem, x, sub, 1);
      if (previous > 0.0) CHECK(r < 0.9 * previous);
      previous = r;
    }
  }
  {
    const SdeProblem problem{fields::linear(), std::nullopt, 1.0, 1.0, HurstIndex(0.35)};
    const FbmPath b = fbm::generate_path(1 << 8, 1.0, HurstIndex(0.35), 67);
    const auto flow_solution = sde::solve_zero_drift(problem, b);
    const auto euler_solution = sde::euler_scheme(problem, b);
    CHECK(sde::residual_check(problem, euler_solution, b, 1) >
          sde::residual_check(problem, flow_solution, b, 1));
  }
}

TEST_CASE("flow of the negated field mirrors the flow of the negated path") {
  const VectorField pos = VectorField::analytic(
      "sin-bounded", [](double x) { return 2.0 + std::sin(x); },
      [](double x) { return std::cos(x); });
  const VectorField neg = VectorField::analytic(
      "neg-sin-bounded", [](double x) { return -(2.0 + std::sin(x)); },
      [](double x) { return -std::cos(x); });
  for (double bval : {-1.3, -0.4, 0.2, 0.9, 2.1}) {
    CHECK(flows::flow(0.3, bval, neg) ==
          doctest::Approx(flows::flow(0.3, -bval, pos)).epsilon(1e-9));
  }
}

TEST_CASE("solution diagnostics carry the method tag") {
  const FbmPath b = fbm::generate_path(16, 1.0, HurstIndex(0.5), 71);
  const SdeProblem problem{fields::linear(), std::nullopt, 1.0, 1.0, HurstIndex(0.5)};
  CHECK(sde::solve_zero_drift(problem, b).method_tag == sde::MethodTag::closed_flow);
  CHECK(sde::solve_doss_sussmann(problem, b).method_tag == sde::MethodTag::doss_sussmann);
  CHECK(sde::euler_scheme(problem, b).method_tag == sde::MethodTag::euler);
  CHECK(sde::crank_nicholson_scheme(problem, b).method_tag ==
        sde::MethodTag::crank_nicholson);
}
