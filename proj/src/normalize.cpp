#include <algorithm>
#include <cmath>
#include <numbers>

#include "vcl/balance.hpp"
#include "vcl/config.hpp"
#include "vcl/error.hpp"

namespace vcl {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Vortex> sorted_lexicographic(std::vector<Vortex> vs) {
  std::stable_sort(vs.begin(), vs.end(), [](const Vortex& a, const Vortex& b) {
    if (a.p.real() != b.p.real()) return a.p.real() < b.p.real();
    return a.p.imag() < b.p.imag();
  });
  return vs;
}

// Circular mean of lattice coordinates in [0, 1); nullopt when the samples
// are spread evenly enough that no mean is defined.
std::optional<double> circular_mean(const std::vector<double>& coords) {
  cplx acc{0.0, 0.0};
  for (double x : coords) acc += std::polar(1.0, kTwoPi * x);
  if (std::abs(acc) < 1e-8 * static_cast<double>(coords.size())) return std::nullopt;
  double t = std::arg(acc) / kTwoPi;
  if (t < 0.0) t += 1.0;
  return t;
}

// Translation taking the periodic centroid to the middle of the fundamental
// domain: 1/2 (singly) or (1 + tau)/2 (doubly).
cplx periodic_shift(const VortexConfig& c) {
  const Geometry& g = c.geometry();
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& v : c.vortices()) {
    if (g.kind == GeometryKind::SinglyPeriodic) {
      xs.push_back(v.p.real());
      ys.push_back(v.p.imag());
    } else {
      auto [x, y] = lattice_coordinates(v.p, g.tau);
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  const auto mx = circular_mean(xs);
  const double dx = mx ? 0.5 - *mx : 0.0;
  if (g.kind == GeometryKind::SinglyPeriodic) {
    double my = 0.0;
    for (double y : ys) my += y;
    my /= static_cast<double>(ys.size());
    return {dx, -my};
  }
  const auto my = circular_mean(ys);
  const double dy = my ? 0.5 - *my : 0.0;
  return dx + dy * g.tau;
}

}  // namespace

std::pair<VortexConfig, Motion> normalize(const VortexConfig& c, const Motion& m, double tol) {
  const auto res = residual(c, m);
  const double sup = sup_norm(res);
  if (!(sup < tol)) {
    throw Error(ErrorKind::NotBalanced,
                "normalize requires a balanced configuration (sup-norm " + std::to_string(sup) + ")");
  }
  const CrystalClass cls = classify(c, m, tol);
  std::vector<Vortex> vs = c.vortices();
  Motion out = m;

  if (c.geometry().periodic()) {
    const cplx shift = periodic_shift(c);
    for (auto& v : vs) v.p = fundamental_domain(v.p + shift, c.geometry());
    return {VortexConfig(c.geometry(), sorted_lexicographic(std::move(vs))), out};
  }

  switch (cls.kind) {
    case CrystalClass::Kind::Rotating: {
      if (m.omega == 0.0) throw Error(ErrorKind::ZeroMotion, "rotating normalization needs omega != 0");
      const cplx center = cplx{0.0, 1.0} * m.v / m.omega;
      const double s = std::sqrt(std::abs(m.omega));
      for (auto& v : vs) v.p = s * (v.p - center);
      out.v = 0.0;
      out.omega = m.omega > 0.0 ? 1.0 : -1.0;
      vs = sorted_lexicographic(std::move(vs));
      break;
    }
    case CrystalClass::Kind::Translating: {
      // p -> conj(v) p sends the velocity to 1; then centre the plain centroid.
      const cplx a = std::conj(m.v);
      cplx centroid{0.0, 0.0};
      for (const auto& v : vs) centroid += a * v.p;
      centroid /= static_cast<double>(vs.size());
      for (auto& v : vs) v.p = a * v.p - centroid;
      out.v = 1.0;
      out.omega = 0.0;
      vs = sorted_lexicographic(std::move(vs));
      break;
    }
    case CrystalClass::Kind::Stationary: {
      if (vs.size() >= 2) {
        const cplx p0 = vs[0].p;
        const cplx d = vs[1].p - p0;
        for (auto& v : vs) v.p = (v.p - p0) / d;
        vs[0].p = 0.0;
        vs[1].p = 1.0;
      } else {
        vs[0].p = 0.0;
      }
      out = Motion{};
      break;
    }
  }
  return {VortexConfig(c.geometry(), std::move(vs)), out};
}

}  // namespace vcl
