#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vcl/kernels.hpp"

namespace vcl {

/// Minimum separation between two vortices (modulo the lattice).
inline constexpr double kMinSeparation = 1e-10;

struct Vortex {
  cplx p;
  int sigma = 1;
};

/// A binary point-vortex configuration. Construction validates circulations
/// and separations and stores periodic positions in the fundamental domain
/// ([0,1) in lattice coordinates).
class VortexConfig {
 public:
  VortexConfig() = default;
  VortexConfig(Geometry geometry, std::vector<Vortex> vortices);

  const Geometry& geometry() const { return geometry_; }
  const std::vector<Vortex>& vortices() const { return vortices_; }
  std::size_t size() const { return vortices_.size(); }
  bool empty() const { return vortices_.empty(); }

  std::vector<cplx> positions() const;
  std::vector<int> circulations() const;

  int n_plus() const;
  int n_minus() const;
  /// m = n_+ - n_-.
  int total_circulation() const { return n_plus() - n_minus(); }

  /// Same geometry and circulations, new positions (re-validated).
  VortexConfig with_positions(std::span<const cplx> positions) const;

 private:
  Geometry geometry_;
  std::vector<Vortex> vortices_;
};

/// Representative of p in the fundamental domain of g.
cplx fundamental_domain(cplx p, const Geometry& g);

/// Rigid-motion parameters: dp/dt = v + i omega p.
struct Motion {
  cplx v{0.0, 0.0};
  double omega = 0.0;
};

/// Planar isometry z -> a z + b or z -> a conj(z) + b, |a| = 1.
struct Isometry {
  enum class Kind { Rotation, Reflection, Translation };

  Kind kind = Kind::Rotation;
  bool conjugate = false;
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};

  cplx operator()(cplx z) const { return (conjugate ? a * std::conj(z) : a * z) + b; }

  static Isometry rotation(cplx center, double angle);
  /// Reflection across the line through `point` with direction angle `angle`.
  static Isometry reflection(cplx point, double angle);
  static Isometry translation(cplx t);
};

struct SymmetryElement {
  Isometry map;
  bool circulation_preserving = true;
};

/// Non-identity symmetries of a configuration. detect_symmetries stores every
/// element it finds, so order() is the group order in that case.
struct SymmetryGroup {
  std::vector<SymmetryElement> generators;

  std::size_t order() const { return generators.size() + 1; }
  bool empty() const { return generators.empty(); }
};

struct CrystalClass {
  enum class Kind { Rotating, Translating, Stationary };

  Kind kind = Kind::Stationary;
  int n = 0;
  int n_plus = 0;
  int n_minus = 0;
  int m = 0;
};

std::string_view to_string(CrystalClass::Kind kind) noexcept;

/// Index permutation induced by a symmetry element: vortex k maps to
/// result[k]. Empty if the element does not map the configuration to itself
/// with the declared circulation action within tol.
std::optional<std::vector<std::size_t>> symmetry_permutation(const VortexConfig& c,
                                                             const SymmetryElement& element,
                                                             double tol = 1e-9);

SymmetryGroup detect_symmetries(const VortexConfig& c, double tol = 1e-9);

struct ConfigDocument {
  VortexConfig config;
  std::optional<Motion> motion;
  std::optional<SymmetryGroup> symmetry;
};

/// Parses the JSON configuration document. Schema violations raise
/// ErrorKind::Schema with the offending field path in the message.
ConfigDocument parse_config(std::string_view text);

std::string serialize_config(const VortexConfig& c, const std::optional<Motion>& m = std::nullopt,
                             const std::optional<SymmetryGroup>& symmetry = std::nullopt);

/// Class-dependent gauge normalization; see README for the conventions.
/// Requires (c, m) to be balanced within tol.
std::pair<VortexConfig, Motion> normalize(const VortexConfig& c, const Motion& m,
                                          double tol = 1e-10);

}  // namespace vcl
