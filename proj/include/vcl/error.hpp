#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vcl {

enum class ErrorKind {
  SingularInput,
  InvalidModulus,
  Schema,
  InvariantViolation,
  NotBalanced,
  ZeroMotion,
  CoincidentVortices,
  UnsupportedGeometry,
  InconsistentClass,
  NoConvergence,
  SingularNormalEquations,
  CollisionAbort,
  PathThroughVortex,
  InvalidGrid,
  ParameterCountMismatch,
  OutOfRange,
  NoRealRoot,
  MultipleRoots,
  NotASymmetry,
  InvalidArgument,
  Io,
};

/// Kebab-case identifier used in machine-readable error objects.
std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vcl
