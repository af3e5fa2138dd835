#include "vcl/error.hpp"

namespace vcl {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SingularInput: return "singular-input";
    case ErrorKind::InvalidModulus: return "invalid-modulus";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::InvariantViolation: return "invariant-violation";
    case ErrorKind::NotBalanced: return "not-balanced";
    case ErrorKind::ZeroMotion: return "zero-motion";
    case ErrorKind::CoincidentVortices: return "coincident-vortices";
    case ErrorKind::UnsupportedGeometry: return "unsupported-geometry";
    case ErrorKind::InconsistentClass: return "inconsistent-class";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::SingularNormalEquations: return "singular-normal-equations";
    case ErrorKind::CollisionAbort: return "collision-abort";
    case ErrorKind::PathThroughVortex: return "path-through-vortex";
    case ErrorKind::InvalidGrid: return "invalid-grid";
    case ErrorKind::ParameterCountMismatch: return "parameter-count-mismatch";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::NoRealRoot: return "no-real-root";
    case ErrorKind::MultipleRoots: return "multiple-roots";
    case ErrorKind::NotASymmetry: return "not-a-symmetry";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace vcl
