#include "fbmsde/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

#include "fbmsde/kernels.hpp"
#include "fbmsde/rng.hpp"

namespace fbmsde::fbm {
namespace {

// Autocovariance of unit-spaced fractional Gaussian noise at lag k.
double fgn_autocov(std::int64_t k, double two_h) {
  const double ka = static_cast<double>(std::llabs(k));
  return 0.5 * (std::pow(ka + 1.0, two_h) - 2.0 * std::pow(ka, two_h) +
                std::pow(std::fabs(ka - 1.0), two_h));
}

// FFTW plans are not thread-safe to create; execution on caller-owned arrays
// is. One cached plan pair per transform size.
class FftEngine {
public:
  static FftEngine& instance() {
    static FftEngine engine;
    return engine;
  }

  // In-place complex DFT (unnormalized, forward sign convention).
  void forward(std::vector<std::complex<double>>& data) {
    fftw_plan plan = plan_for(data.size());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
  }

private:
  fftw_plan plan_for(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    // Plan on a scratch buffer with FFTW_ESTIMATE so planning never touches
    // caller data and stays deterministic.
    std::vector<std::complex<double>> scratch(n);
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(n), reinterpret_cast<fftw_complex*>(scratch.data()),
        reinterpret_cast<fftw_complex*>(scratch.data()), FFTW_FORWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw GenerationError("FFTW failed to create a plan");
    plans_.emplace(n, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

struct SpectrumCacheKey {
  std::int64_t n;
  double hurst;
  bool operator<(const SpectrumCacheKey& o) const {
    return n != o.n ? n < o.n : hurst < o.hurst;
  }
};

// Cached embedding eigenvalues keyed by (n, H); shared across paths.
std::shared_ptr<const std::vector<double>> embedding_spectrum(std::int64_t n,
                                                              HurstIndex h) {
  static std::mutex mutex;
  static std::map<SpectrumCacheKey, std::shared_ptr<const std::vector<double>>> cache;
  const SpectrumCacheKey key{n, h.value()};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const std::int64_t m = 2 * n;
  std::vector<std::complex<double>> row(static_cast<std::size_t>(m));
  const double two_h = 2.0 * h.value();
  for (std::int64_t j = 0; j <= n; ++j) row[static_cast<std::size_t>(j)] = fgn_autocov(j, two_h);
  for (std::int64_t j = 1; j < n; ++j)
    row[static_cast<std::size_t>(m - j)] = row[static_cast<std::size_t>(j)];
  FftEngine::instance().forward(row);
  auto eig = std::make_shared<std::vector<double>>(static_cast<std::size_t>(m));
  for (std::int64_t j = 0; j < m; ++j)
    (*eig)[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)].real();
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, eig);
  return cache.find(key)->second;
}

// Draws n unit-spaced fGn increments through the circulant embedding.
// Returns false when the embedding is not usable (eigenvalue below the
// round-off tolerance), in which case the caller falls back to Cholesky.
bool sample_increments_circulant(std::int64_t n, HurstIndex h, GaussianStream& gauss,
                                 std::vector<double>& increments) {
  const auto eig = embedding_spectrum(n, h);
  const std::int64_t m = 2 * n;
  double max_eig = 0.0, min_eig = 0.0;
  for (double v : *eig) {
    max_eig = std::max(max_eig, v);
    min_eig = std::min(min_eig, v);
  }
  // The fGn embedding is nonnegative definite; anything mildly negative is
  // round-off and gets clipped, anything worse disables the method.
  if (min_eig < -1e-9 * max_eig) return false;

  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(m));
  const double inv_m = 1.0 / static_cast<double>(m);
  auto lam = [&](std::int64_t j) {
    const double v = (*eig)[static_cast<std::size_t>(j)];
    return v > 0.0 ? v : 0.0;
  };
  spectrum[0] = std::sqrt(lam(0) * inv_m) * gauss.next();
  for (std::int64_t j = 1; j < n; ++j) {
    const double scale = std::sqrt(0.5 * lam(j) * inv_m);
    const double re = gauss.next();
    const double im = gauss.next();
    spectrum[static_cast<std::size_t>(j)] = {scale * re, scale * im};
    spectrum[static_cast<std::size_t>(m - j)] = {scale * re, -scale * im};
  }
  spectrum[static_cast<std::size_t>(n)] = std::sqrt(lam(n) * inv_m) * gauss.next();

  FftEngine::instance().forward(spectrum);
  increments.resize(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k)
    increments[static_cast<std::size_t>(k)] = spectrum[static_cast<std::size_t>(k)].real();
  return true;
}

// Exact O(n^3) fallback: Cholesky of the full covariance of (B_{t_1}..B_{t_n})
// on the unit-spaced grid.
void sample_values_cholesky(std::int64_t n, HurstIndex h, GaussianStream& gauss,
                            std::vector<double>& unit_values) {
  using Matrix = Eigen::MatrixXd;
  const double two_h = 2.0 * h.value();
  Matrix cov(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double ti = static_cast<double>(i + 1);
    for (std::int64_t j = 0; j <= i; ++j) {
      const double tj = static_cast<double>(j + 1);
      const double c = 0.5 * (std::pow(ti, two_h) + std::pow(tj, two_h) -
                              std::pow(ti - tj, two_h));
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }
  Eigen::LLT<Matrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    // jitter once at round-off scale before giving up
    const double jitter = 1e-12 * cov.trace() / static_cast<double>(n);
    llt.compute(cov + jitter * Matrix::Identity(n, n));
    if (llt.info() != Eigen::Success)
      throw GenerationError(
          "fBm covariance is not positive definite after regularization (n=" +
          std::to_string(n) + ", H=" + std::to_string(h.value()) + ")");
  }
  Eigen::VectorXd z(n);
  for (std::int64_t i = 0; i < n; ++i) z(i) = gauss.next();
  Eigen::VectorXd x = llt.matrixL() * z;
  unit_values.assign(x.data(), x.data() + n);
}

} // namespace

double covariance(double s, double t, HurstIndex h) {
  if (!(s >= 0.0) || !(t >= 0.0))
    throw DomainError("fBm covariance requires nonnegative times");
  const double two_h = 2.0 * h.value();
  return 0.5 * (std::pow(s, two_h) + std::pow(t, two_h) - std::pow(std::fabs(t - s), two_h));
}

FbmPath generate_path(std::int64_t n, double T, HurstIndex h, std::uint64_t seed,
                      GeneratorTag method) {
  if (n < 1) throw DomainError("path needs at least one step");
  if (!(T > 0.0)) throw DomainError("horizon must be positive");

  GaussianStream gauss(seed);
  // Unit-spaced sampling; the grid spacing enters through self-similarity.
  const double scale = std::pow(T / static_cast<double>(n), h.value());

  std::vector<double> values(static_cast<std::size_t>(n) + 1, 0.0);
  GeneratorTag used = method;
  if (method == GeneratorTag::circulant) {
    std::vector<double> increments;
    if (sample_increments_circulant(n, h, gauss, increments)) {
      double acc = 0.0;
      for (std::int64_t k = 0; k < n; ++k) {
        acc += scale * increments[static_cast<std::size_t>(k)];
        values[static_cast<std::size_t>(k) + 1] = acc;
      }
    } else {
      used = GeneratorTag::cholesky;
    }
  }
  if (used == GeneratorTag::cholesky) {
    std::vector<double> unit_values;
    sample_values_cholesky(n, h, gauss, unit_values);
    for (std::int64_t k = 0; k < n; ++k)
      values[static_cast<std::size_t>(k) + 1] = scale * unit_values[static_cast<std::size_t>(k)];
  }
  return FbmPath{h, T, n, std::move(values), seed, used};
}

std::vector<double> circulant_eigenvalues(std::int64_t n, HurstIndex h) {
  return *embedding_spectrum(n, h);
}

FbmPath FbmPath::restrict_to(std::int64_t coarse_steps) const {
  if (coarse_steps < 1 || steps % coarse_steps != 0)
    throw DomainError("restriction grid must divide the path grid");
  const std::int64_t stride = steps / coarse_steps;
  std::vector<double> coarse(static_cast<std::size_t>(coarse_steps) + 1);
  for (std::int64_t k = 0; k <= coarse_steps; ++k)
    coarse[static_cast<std::size_t>(k)] = values[static_cast<std::size_t>(k * stride)];
  return FbmPath{hurst, horizon, coarse_steps, std::move(coarse), seed, generator_tag};
}

IncrementView::IncrementView(const FbmPath& path)
    : deltas_(static_cast<std::size_t>(path.steps)) {
  kernels::adjacent_diff(path.values, deltas_);
}

double IncrementView::sup_pow(int p) const {
  if (p < 1) throw DomainError("sup_pow needs p >= 1");
  return kernels::max_abs_pow(deltas_, p);
}

} // namespace fbmsde::fbm
