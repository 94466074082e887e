#pragma once

#include <stdexcept>
#include <string>

namespace gkz {

enum class ErrorKind {
  // lattice
  DegenerateConfiguration,
  DuplicatePoint,
  LowerDimensionalPolytope,
  NonIntegerVolume,
  SizeLimitExceeded,
  InvalidArgument,
  // weyl / tautsys
  VariableMismatch,
  SaturationBudgetExceeded,
  // series
  DegreeViolation,
  UnsupportedFamily,
  TruncationTooSmall,
  // periods
  NoInteriorMonomial,
  SingularOnContour,
  NonConvergent,
  DivergentAtBoundary,
  PoleNearPath,
  MultipleRoot,
  StencilOutOfDomain,
  UnsupportedDimension,
  // cli
  SchemaError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so front ends can map
/// it onto exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gkz
