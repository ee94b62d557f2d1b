#pragma once

#include <string>

#include "fbmsde/vector_field.hpp"

namespace fbmsde::fields {

/// Named coefficient presets exposed to the CLI and config files:
///   linear                sigma(x) = x
///   affine(c)             the constant field x -> c
///   sin-bounded           sigma(x) = 2 + sin x
///   quadratic-ss(a,b,g)   sigma(x)^2 = a x^2 + b x + g
VectorField linear();
VectorField affine(double c);
VectorField sin_bounded();
VectorField quadratic_ss(double alpha, double beta, double gamma);

/// Parse a preset spec like "linear", "affine(2)", "quadratic-ss(1,0,0)".
/// Throws DomainError for unknown names or malformed arguments.
VectorField parse(const std::string& spec);

/// Integrand presets for the change-of-variables experiments:
/// "monomial(k)" gives f(x) = x^k with antiderivative x^(k+1)/(k+1).
struct IntegrandPair {
  VectorField f;
  std::function<double(double)> antiderivative;
};
IntegrandPair parse_integrand(const std::string& spec);

} // namespace fbmsde::fields
