#include "fbmsde/fields.hpp"

#include <cmath>
#include <vector>

#include "fbmsde/errors.hpp"

namespace fbmsde::fields {
namespace {

struct ParsedSpec {
  std::string name;
  std::vector<double> args;
};

ParsedSpec split_spec(const std::string& spec) {
  const auto open = spec.find('(');
  if (open == std::string::npos) return {spec, {}};
  if (spec.back() != ')')
    throw DomainError("malformed field preset '" + spec + "': missing ')'");
  ParsedSpec out;
  out.name = spec.substr(0, open);
  std::string args = spec.substr(open + 1, spec.size() - open - 2);
  std::size_t pos = 0;
  while (pos < args.size()) {
    auto comma = args.find(',', pos);
    if (comma == std::string::npos) comma = args.size();
    const std::string tok = args.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      out.args.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw DomainError("malformed argument '" + tok + "' in preset '" + spec + "'");
    }
    pos = comma + 1;
  }
  return out;
}

} // namespace

VectorField linear() {
  auto v = VectorField::analytic(
      "linear", [](double x) { return x; }, [](double) { return 1.0; },
      [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; });
  v.mark_identity();
  return v;
}

VectorField affine(double c) {
  return VectorField::analytic(
      "affine", [c](double) { return c; }, [](double) { return 0.0; },
      [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; });
}

VectorField sin_bounded() {
  return VectorField::analytic(
      "sin-bounded", [](double x) { return 2.0 + std::sin(x); },
      [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); },
      [](double x) { return -std::cos(x); }, [](double x) { return std::sin(x); });
}

VectorField quadratic_ss(double alpha, double beta, double gamma) {
  return QuadraticSigmaSquared{alpha, beta, gamma}.field();
}

VectorField parse(const std::string& spec) {
  const ParsedSpec p = split_spec(spec);
  auto expect_args = [&](std::size_t n) {
    if (p.args.size() != n)
      throw DomainError("preset '" + p.name + "' takes " + std::to_string(n) +
                        " argument(s), got " + std::to_string(p.args.size()));
  };
  if (p.name == "linear") {
    expect_args(0);
    return linear();
  }
  if (p.name == "affine") {
    expect_args(1);
    return affine(p.args[0]);
  }
  if (p.name == "sin-bounded") {
    expect_args(0);
    return sin_bounded();
  }
  if (p.name == "quadratic-ss") {
    expect_args(3);
    return quadratic_ss(p.args[0], p.args[1], p.args[2]);
  }
  throw DomainError("unknown field preset '" + p.name +
                    "' (known: linear, affine(c), sin-bounded, quadratic-ss(a,b,g))");
}

IntegrandPair parse_integrand(const std::string& spec) {
  const ParsedSpec p = split_spec(spec);
  if (p.name != "monomial")
    throw DomainError("unknown integrand preset '" + p.name + "' (known: monomial(k))");
  if (p.args.size() != 1 || p.args[0] != std::floor(p.args[0]) || p.args[0] < 0 ||
      p.args[0] > 12)
    throw DomainError("monomial(k) needs an integer k in 0..12");
  const int k = static_cast<int>(p.args[0]);
  auto pw = [](double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  };
  auto deriv = [k, pw](int order) -> VectorField::Fn {
    double c = 1.0;
    for (int i = 0; i < order; ++i) c *= (k - i);
    const int e = k - order;
    if (e < 0) return [](double) { return 0.0; };
    return [c, e, pw](double x) { return c * pw(x, e); };
  };
  IntegrandPair out{
      VectorField::analytic("monomial", deriv(0), deriv(1), deriv(2), deriv(3), deriv(4)),
      [k, pw](double x) { return pw(x, k + 1) / (k + 1); }};
  return out;
}

} // namespace fbmsde::fields
