#pragma once

// Hand-rolled random configurations for property tests. Every generator
// takes the engine by reference so each test case owns a fixed seed.

#include <algorithm>
#include <random>
#include <vector>

#include "vcl/config.hpp"

namespace gen {

using vcl::cplx;

inline cplx point(std::mt19937_64& rng, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  return {u(rng), u(rng)};
}

inline int sign(std::mt19937_64& rng) { return std::bernoulli_distribution(0.5)(rng) ? 1 : -1; }

/// n vortices with pairwise separation at least min_sep (modulo the lattice
/// for periodic geometries). Positions are drawn from the unit cell for
/// periodic geometries and from [-1, 1]^2 otherwise.
inline vcl::VortexConfig config(std::mt19937_64& rng, const vcl::Geometry& g, int n, double min_sep = 0.1) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<vcl::Vortex> vs;
  while (static_cast<int>(vs.size()) < n) {
    cplx p = g.periodic() ? u(rng) + u(rng) * g.tau : point(rng, 1.0);
    const bool clear = std::all_of(vs.begin(), vs.end(), [&](const vcl::Vortex& v) {
      return std::abs(vcl::lattice_reduce(p - v.p, g)) > min_sep;
    });
    if (clear) vs.push_back({p, sign(rng)});
  }
  return vcl::VortexConfig(g, vs);
}

/// Modulus with Re tau in [-0.5, 0.5] and Im tau in [0.6, 2].
inline cplx tau(std::mt19937_64& rng) {
  return {std::uniform_real_distribution<double>(-0.5, 0.5)(rng),
          std::uniform_real_distribution<double>(0.6, 2.0)(rng)};
}

inline vcl::Geometry geometry(std::mt19937_64& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return vcl::Geometry::finite();
    case 1: return vcl::Geometry::singly();
    default: return vcl::Geometry::doubly(tau(rng));
  }
}

}  // namespace gen
