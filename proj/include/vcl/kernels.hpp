#pragma once

// Interaction kernels for point vortices in the plane, the annulus C/<1>
// and the flat torus C/<1, tau>, together with the Weierstrass functions
// they are built from.

#include <complex>
#include <utility>

namespace vcl {

using cplx = std::complex<double>;

enum class GeometryKind { Finite, SinglyPeriodic, DoublyPeriodic };

/// Ambient surface of a configuration. Singly periodic geometries use the
/// period 1; doubly periodic ones the lattice generated by 1 and tau.
struct Geometry {
  GeometryKind kind = GeometryKind::Finite;
  cplx tau{0.0, 1.0};

  static Geometry finite() { return {}; }
  static Geometry singly() { return {GeometryKind::SinglyPeriodic, {0.0, 1.0}}; }
  /// Throws ErrorKind::InvalidModulus unless Im tau > 0.
  static Geometry doubly(cplx tau);

  bool periodic() const { return kind != GeometryKind::Finite; }
  bool operator==(const Geometry& other) const;
};

struct WirtingerPair {
  cplx d_z;
  cplx d_zbar;
};

/// Points closer than this to a lattice point are rejected as singular.
inline constexpr double kSingularRadius = 1e-13;

/// Upsilon(z): 1/z, pi cot(pi z), or zeta(z) - xi(z) depending on g.
cplx upsilon(cplx z, const Geometry& g);

/// Wirtinger derivatives (d/dz, d/dzbar) of upsilon.
WirtingerPair upsilon_wirtinger(cplx z, const Geometry& g);

cplx weierstrass_zeta(cplx z, cplx tau);
cplx weierstrass_p(cplx z, cplx tau);

/// xi(z) = 2 x zeta(1/2) + 2 y zeta(tau/2) with z = x + y tau.
cplx xi(cplx z, cplx tau);

/// zeta(1/2; tau) and zeta(tau/2; tau).
struct HalfPeriodZeta {
  cplx eta1;
  cplx eta2;
};
HalfPeriodZeta half_period_zeta(cplx tau);

/// Coefficients of the decomposition xi(z) = c1 z + c2 conj(z).
struct XiWirtinger {
  cplx c1;
  cplx c2;
};
XiWirtinger xi_wirtinger(cplx tau);

/// Real lattice coordinates (x, y) with z = x + y tau.
std::pair<double, double> lattice_coordinates(cplx z, cplx tau);

/// Representative of z modulo the lattice of g, near the origin. Identity for
/// finite geometry.
cplx lattice_reduce(cplx z, const Geometry& g);

/// pi cot(pi z), evaluated without overflow far from the real axis.
cplx pi_cot_pi(cplx z);

}  // namespace vcl
