#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fbmsde/fbm.hpp"
#include "fbmsde/vector_field.hpp"

namespace fbmsde::rvint {

/// Discrete measure nu_m on [0,1]: for m >= 2 it charges the nodes j/(2m-2)
/// with the exact integrals of the Lagrange basis polynomials; nu_1 puts mass
/// 1/2 on each endpoint. It agrees with Lebesgue measure on polynomials of
/// degree up to 2m-1.
struct NewtonCotesMeasure {
  int order;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Supported orders are 1..6; beyond that the weights lose too many digits
/// to sign cancellation. Weights are computed in exact rational arithmetic
/// and converted to double once.
NewtonCotesMeasure newton_cotes_measure(int m);

/// A process sampled on a uniform grid over [0, horizon].
struct SampledPath {
  double horizon;
  std::vector<double> values; // n+1 samples

  std::int64_t steps() const { return static_cast<std::int64_t>(values.size()) - 1; }
  static SampledPath from_fbm(const fbm::FbmPath& path) {
    return SampledPath{path.horizon, path.values};
  }
};

/// Riemann discretization of the symmetric (Stratonovich-like) integral:
/// sum over k of (Y_{k+1}+Y_k)/2 * (X_{k+1}-X_k).
double symmetric_integral(const SampledPath& y, const SampledPath& x);

/// m-order Newton-Cotes functional of (f, Y, X): the integrand is averaged
/// over the chord of Y under nu_m before multiplying the X increment.
double nc_functional(const VectorField& f, const SampledPath& y, const SampledPath& x,
                     int m);

/// Smallest n >= 1 with H > 1/(4n+2): the least order making the one-argument
/// change-of-variables formula available at this H.
int n_threshold(HurstIndex h);

/// Smallest m >= 1 with H > 1/(2m+1): same for the two-argument formula.
int m_threshold(HurstIndex h);

/// sum over k of (B_{(k+1)h} - B_{kh})^p
double power_sum(const fbm::FbmPath& path, int p);
double power_sum(std::span<const double> increments, int p);

} // namespace fbmsde::rvint
