#include "vcl/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vcl/error.hpp"

namespace vcl {
namespace {

double lattice_distance(cplx a, cplx b, const Geometry& g) {
  return std::abs(lattice_reduce(a - b, g));
}

bool same_isometry(const Isometry& x, const Isometry& y, const Geometry& g, double tol) {
  if (x.conjugate != y.conjugate) return false;
  if (std::abs(x.a - y.a) > tol) return false;
  return g.periodic() ? lattice_distance(x.b, y.b, g) <= tol : std::abs(x.b - y.b) <= tol;
}

}  // namespace

cplx fundamental_domain(cplx p, const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::Finite:
      return p;
    case GeometryKind::SinglyPeriodic:
      for (int pass = 0; pass < 3; ++pass) {
        const double k = std::floor(p.real());
        if (k == 0.0) break;
        p -= k;
      }
      return p;
    case GeometryKind::DoublyPeriodic:
      for (int pass = 0; pass < 3; ++pass) {
        auto [x, y] = lattice_coordinates(p, g.tau);
        const double ky = std::floor(y);
        if (ky != 0.0) {
          p -= ky * g.tau;
          x = lattice_coordinates(p, g.tau).first;
        }
        const double kx = std::floor(x);
        if (kx != 0.0) p -= kx;
        if (ky == 0.0 && kx == 0.0) break;
      }
      return p;
  }
  return p;
}

VortexConfig::VortexConfig(Geometry geometry, std::vector<Vortex> vortices)
    : geometry_(geometry), vortices_(std::move(vortices)) {
  if (geometry_.kind == GeometryKind::DoublyPeriodic) geometry_ = Geometry::doubly(geometry_.tau);
  for (std::size_t k = 0; k < vortices_.size(); ++k) {
    auto& v = vortices_[k];
    if (v.sigma != 1 && v.sigma != -1) {
      throw Error(ErrorKind::InvariantViolation,
                  "vortices[" + std::to_string(k) + "].sigma: circulation must be +1 or -1");
    }
    if (!std::isfinite(v.p.real()) || !std::isfinite(v.p.imag())) {
      throw Error(ErrorKind::InvariantViolation,
                  "vortices[" + std::to_string(k) + "].p: position must be finite");
    }
    v.p = fundamental_domain(v.p, geometry_);
  }
  for (std::size_t i = 0; i < vortices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vortices_.size(); ++j) {
      if (lattice_distance(vortices_[i].p, vortices_[j].p, geometry_) <= kMinSeparation) {
        throw Error(ErrorKind::CoincidentVortices, "vortices[" + std::to_string(i) + "] and vortices[" +
                                                       std::to_string(j) + "] coincide");
      }
    }
  }
}

std::vector<cplx> VortexConfig::positions() const {
  std::vector<cplx> out;
  out.reserve(vortices_.size());
  for (const auto& v : vortices_) out.push_back(v.p);
  return out;
}

std::vector<int> VortexConfig::circulations() const {
  std::vector<int> out;
  out.reserve(vortices_.size());
  for (const auto& v : vortices_) out.push_back(v.sigma);
  return out;
}

int VortexConfig::n_plus() const {
  return static_cast<int>(std::count_if(vortices_.begin(), vortices_.end(),
                                        [](const Vortex& v) { return v.sigma > 0; }));
}

int VortexConfig::n_minus() const { return static_cast<int>(vortices_.size()) - n_plus(); }

VortexConfig VortexConfig::with_positions(std::span<const cplx> positions) const {
  if (positions.size() != vortices_.size()) {
    throw Error(ErrorKind::InvalidArgument, "position count does not match vortex count");
  }
  std::vector<Vortex> vs = vortices_;
  for (std::size_t k = 0; k < vs.size(); ++k) vs[k].p = positions[k];
  return VortexConfig(geometry_, std::move(vs));
}

Isometry Isometry::rotation(cplx center, double angle) {
  const cplx a = std::polar(1.0, angle);
  return {Kind::Rotation, false, a, center * (1.0 - a)};
}

Isometry Isometry::reflection(cplx point, double angle) {
  const cplx a = std::polar(1.0, 2.0 * angle);
  return {Kind::Reflection, true, a, point - a * std::conj(point)};
}

Isometry Isometry::translation(cplx t) { return {Kind::Translation, false, {1.0, 0.0}, t}; }

std::string_view to_string(CrystalClass::Kind kind) noexcept {
  switch (kind) {
    case CrystalClass::Kind::Rotating: return "rotating";
    case CrystalClass::Kind::Translating: return "translating";
    case CrystalClass::Kind::Stationary: return "stationary";
  }
  return "unknown";
}

std::optional<std::vector<std::size_t>> symmetry_permutation(const VortexConfig& c,
                                                             const SymmetryElement& element,
                                                             double tol) {
  const auto& vs = c.vortices();
  const auto& g = c.geometry();
  std::vector<std::size_t> perm(vs.size());
  std::vector<bool> used(vs.size(), false);
  for (std::size_t k = 0; k < vs.size(); ++k) {
    const cplx image = element.map(vs[k].p);
    const int sigma = element.circulation_preserving ? vs[k].sigma : -vs[k].sigma;
    std::optional<std::size_t> hit;
    double best = tol;
    for (std::size_t l = 0; l < vs.size(); ++l) {
      if (used[l] || vs[l].sigma != sigma) continue;
      const double d = lattice_distance(image, vs[l].p, g);
      if (d <= best) {
        hit = l;
        best = d;
      }
    }
    if (!hit) return std::nullopt;
    used[*hit] = true;
    perm[k] = *hit;
  }
  return perm;
}

SymmetryGroup detect_symmetries(const VortexConfig& c, double tol) {
  SymmetryGroup group;
  if (c.empty()) return group;
  const auto& vs = c.vortices();
  const auto& g = c.geometry();

  auto add = [&](const SymmetryElement& e) {
    if (!symmetry_permutation(c, e, tol)) return;
    for (const auto& existing : group.generators) {
      if (same_isometry(existing.map, e.map, g, tol)) return;
    }
    group.generators.push_back(e);
  };

  if (g.periodic()) {
    std::vector<cplx> shifts{0.5};
    if (g.kind == GeometryKind::DoublyPeriodic) {
      shifts.push_back(g.tau / 2.0);
      shifts.push_back((1.0 + g.tau) / 2.0);
    }
    for (cplx t : shifts) {
      add({Isometry::translation(t), true});
      add({Isometry::translation(t), false});
    }
    return group;
  }

  // Every isometry of a finite configuration fixes its centroid and sends the
  // farthest vortex r to some vortex q at the same distance, so these
  // candidates are exhaustive.
  cplx centroid{0.0, 0.0};
  for (const auto& v : vs) centroid += v.p;
  centroid /= static_cast<double>(vs.size());

  std::size_t ref = 0;
  for (std::size_t k = 1; k < vs.size(); ++k) {
    if (std::abs(vs[k].p - centroid) > std::abs(vs[ref].p - centroid) + tol) ref = k;
  }
  const double radius = std::abs(vs[ref].p - centroid);
  if (radius <= tol) return group;
  const double ref_angle = std::arg(vs[ref].p - centroid);

  for (std::size_t q = 0; q < vs.size(); ++q) {
    if (std::abs(std::abs(vs[q].p - centroid) - radius) > tol) continue;
    const double q_angle = std::arg(vs[q].p - centroid);
    const bool preserving = vs[q].sigma == vs[ref].sigma;
    if (q != ref) add({Isometry::rotation(centroid, q_angle - ref_angle), preserving});
    add({Isometry::reflection(centroid, 0.5 * (q_angle + ref_angle)), preserving});
  }

  auto key = [](const SymmetryElement& e) {
    double angle = std::arg(e.map.a);
    if (angle < -1e-12) angle += 2.0 * std::numbers::pi;
    return std::pair{e.map.conjugate ? 1 : 0, angle};
  };
  std::sort(group.generators.begin(), group.generators.end(),
            [&](const SymmetryElement& x, const SymmetryElement& y) { return key(x) < key(y); });
  return group;
}

}  // namespace vcl
