#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fbmsde {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid argument or out-of-domain input (bad Hurst index, negative time,
/// mismatched grids, unsupported order, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A mathematical existence/uniqueness precondition does not hold for the
/// requested solution form (e.g. nonzero drift where the closed-form flow
/// solution requires the drift to vanish on the reachable range).
class ModelError : public Error {
public:
  using Error::Error;
};

/// Requested operation needs capabilities the inputs do not provide
/// (e.g. analytic derivatives beyond what a field supplies).
class CapabilityError : public Error {
public:
  using Error::Error;
};

/// Gaussian path synthesis failed (non-PD covariance after regularization).
class GenerationError : public Error {
public:
  using Error::Error;
};

/// ODE state escaped the configured magnitude bound.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, double escape_time)
      : Error(what), escape_time(escape_time) {}
  double escape_time;
};

/// Root bracketing / search failed.
class SearchError : public Error {
public:
  using Error::Error;
};

/// A derivative of the two-parameter map underflowed to zero.
class SingularityError : public Error {
public:
  using Error::Error;
};

/// One step of a discrete scheme failed; carries the step index so Monte
/// Carlo drivers can discard and count the path.
class SchemeStepError : public Error {
public:
  enum class Kind { no_root, pole };
  SchemeStepError(const std::string& what, std::int64_t step, Kind kind)
      : Error(what), step(step), kind(kind) {}
  std::int64_t step;
  Kind kind;
};

/// An experiment-level invariant was violated (e.g. discard fraction > 1%).
class ExperimentError : public Error {
public:
  using Error::Error;
};

} // namespace fbmsde
