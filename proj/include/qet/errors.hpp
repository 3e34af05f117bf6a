#pragma once

#include <stdexcept>
#include <string>

namespace qet {

/// Shapes or sizes that do not fit together, or malformed input data.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix or polynomial exceeds the unit bound required for a block-encoding.
/// Carries the offending norm so callers can rescale.
class NormError : public std::domain_error {
 public:
  NormError(const std::string& what, double norm) : std::domain_error(what), norm_(norm) {}
  double norm() const noexcept { return norm_; }

 private:
  double norm_;
};

/// A unitary that does not block-encode the claimed matrix at the requested tolerance.
class EncodingMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside one of the library modules (non-convergence,
/// singular systems, violated postconditions).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

}  // namespace qet
