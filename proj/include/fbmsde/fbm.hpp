#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fbmsde/errors.hpp"

namespace fbmsde {

/// Hurst index H in the open interval (0,1).
class HurstIndex {
public:
  explicit HurstIndex(double value) : value_(value) {
    if (!(value > 0.0) || !(value < 1.0))
      throw DomainError("Hurst index must lie strictly inside (0,1)");
  }
  double value() const { return value_; }

private:
  double value_;
};

namespace fbm {

enum class GeneratorTag { circulant, cholesky };

/// Covariance of fractional Brownian motion at times s, t:
/// (s^A + t^A - |t-s|^A)/2 with A = 2H. Throws DomainError for negative times.
double covariance(double s, double t, HurstIndex h);

/// Equally spaced samples of a fractional Brownian path on [0, T].
struct FbmPath {
  HurstIndex hurst;
  double horizon;           // T > 0
  std::int64_t steps;       // n >= 1
  std::vector<double> values; // n+1 samples at k*T/n, values[0] == 0
  std::uint64_t seed;
  GeneratorTag generator_tag;

  double dt() const { return horizon / static_cast<double>(steps); }
  double time_at(std::int64_t k) const { return dt() * static_cast<double>(k); }

  /// Restriction to a coarser grid: keeps every (steps/coarse_steps)-th
  /// sample. coarse_steps must divide steps.
  FbmPath restrict_to(std::int64_t coarse_steps) const;
};

/// View of the path increments B_{(k+1)h} - B_{kh}.
class IncrementView {
public:
  explicit IncrementView(const FbmPath& path);
  std::span<const double> deltas() const { return deltas_; }
  /// max_k |delta_k|^p
  double sup_pow(int p) const;

private:
  std::vector<double> deltas_;
};

/// Draw a path of n steps on [0, T]. Default method is circulant embedding
/// of the increment autocovariance (exact, O(n log n)); if the embedding has
/// an eigenvalue below -1e-9 times the largest, generation falls back to a
/// Cholesky factorization of the full covariance matrix (exact, O(n^3)).
/// Identical arguments reproduce bit-identical values.
FbmPath generate_path(std::int64_t n, double T, HurstIndex h, std::uint64_t seed,
                      GeneratorTag method = GeneratorTag::circulant);

/// Eigenvalues of the circulant embedding for n unit-spaced increments
/// (exposed for the spectral nonnegativity tests).
std::vector<double> circulant_eigenvalues(std::int64_t n, HurstIndex h);

} // namespace fbm
} // namespace fbmsde
