#pragma once

#include <stdexcept>
#include <string>

namespace penning {

/// Base of every error thrown by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error report.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Two ions coincide (or nearly so) and the Coulomb sum is singular.
class SingularConfigurationError : public Error {
 public:
  explicit SingularConfigurationError(const std::string& what)
      : Error("singular_configuration", what) {}
};

/// Trap or drive parameters violate a physical precondition.
class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what) : Error("configuration", what) {}
};

/// Wrong number of ions / spins for the requested operation.
class ArityError : public Error {
 public:
  explicit ArityError(const std::string& what) : Error("arity", what) {}
};

/// The transverse stiffness has negative eigenvalues: not a stable single plane.
class InstabilityError : public Error {
 public:
  InstabilityError(int unstable_modes, const std::string& what)
      : Error("instability", what), unstable_modes_(unstable_modes) {}
  int unstable_modes() const noexcept { return unstable_modes_; }

 private:
  int unstable_modes_;
};

/// Drive frequency within the resonance guard of a transverse mode.
class ResonanceError : public Error {
 public:
  ResonanceError(int mode, const std::string& what) : Error("resonance", what), mode_(mode) {}
  /// 1-based mode index (1 is COM).
  int mode() const noexcept { return mode_; }

 private:
  int mode_;
};

/// A root search was handed a range without a sign change.
class BracketError : public Error {
 public:
  explicit BracketError(const std::string& what) : Error("bracket", what) {}
};

/// Problem size beyond what an engine is allowed to allocate.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error("capacity", what) {}
};

/// Power-law fit impossible: bin means change sign or too few bins.
class FitError : public Error {
 public:
  FitError(std::string kind, const std::string& what) : Error(std::move(kind), what) {}
};

/// Malformed scenario file or CLI input.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse", what) {}
};

}  // namespace penning
