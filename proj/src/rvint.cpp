#include "fbmsde/rvint.hpp"

#include <cmath>
#include <numeric>

#include "fbmsde/kernels.hpp"

namespace fbmsde::rvint {
namespace {

// Exact rational arithmetic on __int128. The m <= 6 Lagrange products keep
// numerators far below the 2^127 overflow line.
struct Rational {
  __int128 num = 0;
  __int128 den = 1;

  static __int128 gcd(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void reduce() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const __int128 g = gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  Rational operator+(const Rational& o) const {
    Rational r{num * o.den + o.num * den, den * o.den};
    r.reduce();
    return r;
  }
  Rational operator*(const Rational& o) const {
    Rational r{num * o.num, den * o.den};
    r.reduce();
    return r;
  }

  double to_double() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }
};

// Integrates the Lagrange basis polynomial prod_{k != j} (s*u - k)/(j - k)
// over u in [0,1], exactly. s = 2(m-1).
Rational lagrange_basis_integral(int m, int j) {
  const int s = 2 * (m - 1);
  const int count = 2 * (m - 1) + 1;
  // polynomial coefficients of prod (s*u - k), ascending powers of u
  std::vector<__int128> poly{1};
  __int128 denom = 1;
  for (int k = 0; k < count; ++k) {
    if (k == j) continue;
    denom *= (j - k);
    std::vector<__int128> next(poly.size() + 1, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i] * s; // s*u term
      next[i] += poly[i] * (-k);
    }
    poly.swap(next);
  }
  Rational total{0, 1};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Rational term{poly[i], denom * static_cast<__int128>(i + 1)};
    term.reduce();
    total = total + term;
  }
  return total;
}

void check_same_grid(const SampledPath& y, const SampledPath& x) {
  if (y.values.size() != x.values.size() || y.horizon != x.horizon)
    throw DomainError("paths must share the same uniform grid");
  if (x.values.size() < 2) throw DomainError("paths need at least one step");
}

} // namespace

NewtonCotesMeasure newton_cotes_measure(int m) {
  if (m < 1 || m > 6)
    throw DomainError("Newton-Cotes order must be in 1..6 (higher orders lose "
                      "precision to sign cancellation)");
  NewtonCotesMeasure out;
  out.order = m;
  if (m == 1) {
    out.nodes = {0.0, 1.0};
    out.weights = {0.5, 0.5};
    return out;
  }
  const int count = 2 * (m - 1) + 1;
  out.nodes.resize(count);
  out.weights.resize(count);
  for (int j = 0; j < count; ++j) {
    out.nodes[j] = static_cast<double>(j) / static_cast<double>(2 * (m - 1));
    out.weights[j] = lagrange_basis_integral(m, j).to_double();
  }
  // Pin the total mass to exactly 1 so constant integrands telescope; the
  // correction lands on the central weight and is a few ulp at most.
  const double defect = 1.0 - std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  out.weights[(count - 1) / 2] += defect;
  return out;
}

double symmetric_integral(const SampledPath& y, const SampledPath& x) {
  check_same_grid(y, x);
  return kernels::symmetric_sum(y.values, x.values);
}

double nc_functional(const VectorField& f, const SampledPath& y, const SampledPath& x,
                     int m) {
  check_same_grid(y, x);
  if (m == 1) {
    // nu_1 charges the chord endpoints with mass 1/2 each: this is the
    // symmetric integral of f(Y) against X, bit for bit.
    std::vector<double> fy(y.values.size());
    for (std::size_t k = 0; k < fy.size(); ++k) fy[k] = f(y.values[k]);
    return kernels::symmetric_sum(fy, x.values);
  }
  const NewtonCotesMeasure nu = newton_cotes_measure(m);
  const std::size_t n = x.values.size() - 1;
  const std::size_t node_count = nu.nodes.size();
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double yk = y.values[k];
    const double dy = y.values[k + 1] - yk;
    double avg = 0.0;
    for (std::size_t j = 0; j < node_count; ++j)
      avg += nu.weights[j] * f(yk + nu.nodes[j] * dy);
    total += avg * (x.values[k + 1] - x.values[k]);
  }
  return total;
}

int n_threshold(HurstIndex h) {
  int n = 1;
  while (!(h.value() > 1.0 / (4.0 * n + 2.0))) ++n;
  return n;
}

int m_threshold(HurstIndex h) {
  int m = 1;
  while (!(h.value() > 1.0 / (2.0 * m + 1.0))) ++m;
  return m;
}

double power_sum(std::span<const double> increments, int p) {
  if (p < 1) throw DomainError("power sum needs p >= 1");
  return kernels::power_sum(increments, p);
}

double power_sum(const fbm::FbmPath& path, int p) {
  fbm::IncrementView view(path);
  return power_sum(view.deltas(), p);
}

} // namespace fbmsde::rvint
