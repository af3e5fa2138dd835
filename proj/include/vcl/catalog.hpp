#pragma once

// Generators for the named crystal families. Every generator returns a
// configuration together with its rigid motion and is checked against the
// balance equations before returning.

#include <span>
#include <utility>
#include <vector>

#include "vcl/config.hpp"
#include "vcl/polynomial.hpp"

namespace vcl {

using Crystal = std::pair<VortexConfig, Motion>;

/// Roots of the physicists' Hermite polynomial H_n, ascending. 1 <= n <= 50.
std::vector<double> hermite_roots(int n);

/// sigma = -1 at the roots of H_n; v = 0, omega = -1/(2 pi).
Crystal hermite_config(int n);

/// sigma = +1 at the roots of H_{m+1}, sigma = -1 at the roots of H_m.
Crystal interlaced_hermite(int m);

/// Regular n-gon on the unit circle; omega = sigma (n - 1)/(4 pi).
Crystal thomson(int n, int sigma = 1);

/// Unit n-gon of negative vortices plus a centre vortex of circulation
/// sigma_c. Requires n >= 2.
Crystal polygon_with_center(int n, int sigma_c);

/// Radius ratio of the nested (k+1)-gons: the root of
/// N (1 - r^N)/(1 + r^N) = (1 + r^2)/(1 - r^2), N = k + 1, in (0, 1), or in
/// (1, 20) when `outer` is set.
double nested_polygon_ratio(int k, bool outer = false);

/// Positive unit (k+1)-gon and a negative (k+1)-gon of radius r, rotated by
/// pi/(k+1), refined to a rotating crystal.
Crystal nested_polygons(int k, bool outer = false);

struct AdlerMoserPoly {
  int j = 0;
  poly::Poly coeffs;         // ascending, monic, degree j(j+1)/2
  std::vector<cplx> kappa;   // kappa_2 ... kappa_j
};

/// Theta_j from the ladder Theta'_{k+1} Theta_{k-1} - Theta_{k+1} Theta'_{k-1}
/// = (2k+1) Theta_k^2, with kappa_{k+1} the coefficient of z^{deg Theta_{k-1}}
/// in Theta_{k+1}. Needs exactly max(j-1, 0) parameters.
AdlerMoserPoly adler_moser_poly(int j, std::span<const cplx> kappa);

/// Monic Q of the same degree with D_z^2 (P.Q) = 2c D_z (P.Q) (Hirota
/// derivatives), c = 2 pi i conj(v). Negative vortices of the translating
/// crystal with velocity v sit at the roots of Q.
poly::Poly adler_moser_partner(const poly::Poly& p, cplx v = 1.0);

/// Symmetric member of the family: positive vortices at the roots of Theta_j
/// translated by z0 = i s, negative vortices at the roots of the partner,
/// v = 1, invariant under z -> conj(z) (reversing) and z -> -conj(z)
/// (preserving). 1 <= j <= 8.
Crystal adler_moser_config(int j);

/// The symmetry group used for adler_moser_config.
SymmetryGroup adler_moser_symmetry();

/// p = +-i/(4 pi), sigma = (+1, -1), v = 1.
Crystal vortex_pair();

/// Singly periodic street: p1 = 0 (+1), p2 = (staggered ? 1/2 : 0) + i b (-1).
Crystal karman_street(double b, bool staggered = true);

/// Doubly periodic: p1 = 0 (+1), p2 = offset (-1).
Crystal doubly_dipole(cplx tau, cplx offset);

}  // namespace vcl
