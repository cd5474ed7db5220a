#ifndef POLQEC_ERRORS_HPP
#define POLQEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polqec {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input amplitudes do not satisfy the required normalization.
struct NormalizationError : Error {
  using Error::Error;
};

/// Operands have incompatible tensor structure (probe index present on one
/// side only, or terms spread over several ports where one is required).
struct StructureError : Error {
  using Error::Error;
};

/// A measurement partition does not cover every populated mode exactly once.
struct PartitionError : Error {
  using Error::Error;
};

/// Operation applied to a value kind it is not defined for.
struct UnsupportedKindError : Error {
  using Error::Error;
};

/// Scalar parameter outside its admissible range.
struct RangeError : Error {
  using Error::Error;
};

/// Estimator invoked on inputs that carry no information (e.g. two zero powers).
struct EstimateError : Error {
  using Error::Error;
};

/// Invalid run configuration (unknown key, bad value, missing file).
struct ConfigError : Error {
  using Error::Error;
};

/// Failure writing or reading an artifact file.
struct IoError : Error {
  using Error::Error;
};

}  // namespace polqec

#endif  // POLQEC_ERRORS_HPP
