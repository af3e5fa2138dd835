#include "vcl/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "vcl/balance.hpp"
#include "vcl/error.hpp"

namespace vcl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void require_supported(const VortexConfig& c) {
  if (c.geometry().kind == GeometryKind::DoublyPeriodic) {
    throw Error(ErrorKind::UnsupportedGeometry,
                "multigraph heights are implemented for finite and singly periodic geometries");
  }
}

// Distance from p to the segment [a, b].
double segment_distance(cplx a, cplx b, cplx p) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double t = len2 > 0.0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(a + t * d - p);
}

// Distance from the segment to the nearest zero of the height's kernel
// for vortex p (p itself, or p + Z in the singly periodic case).
double clearance(cplx a, cplx b, cplx p, const Geometry& g) {
  if (g.kind == GeometryKind::Finite) return segment_distance(a, b, p);
  const double lo = std::min(a.real(), b.real()) - p.real();
  const double hi = std::max(a.real(), b.real()) - p.real();
  double best = std::numeric_limits<double>::infinity();
  for (double k = std::floor(lo) - 1.0; k <= std::ceil(hi) + 1.0; k += 1.0) {
    best = std::min(best, segment_distance(a, b, p + k));
  }
  return best;
}

double arg_sin_increment(cplx a, cplx b, cplx p, double clear) {
  // Short pieces keep each step well inside (-pi, pi).
  const double piece = std::min(0.25, 0.5 * clear);
  const int count = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / piece)));
  double total = 0.0;
  cplx prev = std::sin(kPi * (a - p));
  for (int s = 1; s <= count; ++s) {
    const cplx z = a + (b - a) * (static_cast<double>(s) / count);
    const cplx cur = std::sin(kPi * (z - p));
    total += std::arg(cur / prev);
    prev = cur;
  }
  return total;
}

cplx centroid(const VortexConfig& c) {
  cplx acc{0.0, 0.0};
  for (const auto& v : c.vortices()) acc += v.p;
  return acc / static_cast<double>(c.size());
}

double min_pair_distance(const VortexConfig& c) {
  double best = std::numeric_limits<double>::infinity();
  const auto& vs = c.vortices();
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      best = std::min(best, std::abs(lattice_reduce(vs[i].p - vs[j].p, c.geometry())));
    }
  }
  return best;
}

bool in_triangle(cplx p, cplx a, cplx b, cplx c) {
  auto cross = [](cplx u, cplx v) { return u.real() * v.imag() - u.imag() * v.real(); };
  const double d1 = cross(b - a, p - a);
  const double d2 = cross(c - b, p - b);
  const double d3 = cross(a - c, p - c);
  const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(neg && pos);
}

// Vortex representatives that may fall inside the sampled region.
std::vector<cplx> vortex_images(const VortexConfig& c, const SampleGrid& g) {
  std::vector<cplx> out;
  for (const auto& v : c.vortices()) {
    if (c.geometry().kind == GeometryKind::Finite) {
      out.push_back(v.p);
      continue;
    }
    const double reach = g.radius + 2.0 * g.spacing;
    for (double k = std::floor(g.center.real() - reach - v.p.real()) - 1.0;
         k <= std::ceil(g.center.real() + reach - v.p.real()) + 1.0; k += 1.0) {
      out.push_back(v.p + k);
    }
  }
  return out;
}

}  // namespace

double multigraph_increment(cplx a, cplx b, const VortexConfig& c) {
  require_supported(c);
  double total = 0.0;
  for (const auto& v : c.vortices()) {
    const double clear = clearance(a, b, v.p, c.geometry());
    if (clear < kPathClearance) {
      std::ostringstream msg;
      msg << "path passes within " << kPathClearance << " of the vortex at (" << v.p.real() << ", "
          << v.p.imag() << ")";
      throw Error(ErrorKind::PathThroughVortex, msg.str());
    }
    const double d = c.geometry().kind == GeometryKind::Finite ? std::arg((b - v.p) / (a - v.p))
                                                               : arg_sin_increment(a, b, v.p, clear);
    total += v.sigma * d;
  }
  return total;
}

double multigraph_base(cplx basepoint, const VortexConfig& c) {
  require_supported(c);
  double total = 0.0;
  for (const auto& v : c.vortices()) {
    if (clearance(basepoint, basepoint, v.p, c.geometry()) < kPathClearance) {
      throw Error(ErrorKind::PathThroughVortex, "basepoint coincides with a vortex");
    }
    const double a = c.geometry().kind == GeometryKind::Finite ? std::arg(basepoint - v.p)
                                                               : std::arg(std::sin(kPi * (basepoint - v.p)));
    total += v.sigma * a;
  }
  return total;
}

double multigraph_height(cplx z, std::span<const cplx> path, const VortexConfig& c) {
  if (path.empty()) return multigraph_base(z, c);
  double h = multigraph_base(path[0], c);
  for (std::size_t i = 1; i < path.size(); ++i) h += multigraph_increment(path[i - 1], path[i], c);
  if (z != path.back()) h += multigraph_increment(path.back(), z, c);
  return h;
}

cplx flow_field(cplx z, const VortexConfig& c) {
  cplx acc{0.0, 0.0};
  for (const auto& v : c.vortices()) acc += static_cast<double>(v.sigma) * upsilon(z - v.p, c.geometry());
  return std::conj(acc / (2.0 * kPi * kI));
}

LimitPeriods limit_periods(const VortexConfig& c, const Motion& m, double eps, double tol) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  const double sup = sup_norm(residual(c, m));
  if (!(sup < tol)) {
    throw Error(ErrorKind::NotBalanced, "limit periods need a balanced configuration (sup-norm " +
                                            std::to_string(sup) + ")");
  }
  const CrystalClass cls = classify(c, m, tol);
  const int n = cls.n;
  LimitPeriods out;
  out.eps = eps;
  out.nu = -2.0 * kPi * m.v;
  out.t0 = {2.0 * kPi * eps * out.nu.real(), 2.0 * kPi * eps * out.nu.imag(), 2.0 * kPi};

  switch (c.geometry().kind) {
    case GeometryKind::Finite:
      if (cls.kind == CrystalClass::Kind::Rotating) {
        out.nu = 0.0;
        out.t0 = {0.0, 0.0, 2.0 * kPi};
        out.screw_angle = 2.0 * kPi * eps * eps * m.omega;
        out.quotient_genus = n - 1;
        out.end_description = cls.m != 0 ? "two helicoidal ends" : "two planar ends";
      } else if (cls.kind == CrystalClass::Kind::Translating) {
        out.quotient_genus = n - 1;
        out.end_description = "two helicoidal ends";
      } else {
        throw Error(ErrorKind::UnsupportedGeometry,
                    "no helicoid-limit construction for finite stationary crystals");
      }
      break;
    case GeometryKind::SinglyPeriodic:
      out.t1 = Vec3{1.0 / eps, 0.0, cls.m * kPi};
      out.quotient_genus = n - 1;
      out.end_description = "four Scherk ends";
      break;
    case GeometryKind::DoublyPeriodic: {
      if (cls.m != 0) {
        throw Error(ErrorKind::InvariantViolation,
                    "doubly periodic limit requires m = 0, got m = " + std::to_string(cls.m));
      }
      cplx moment{0.0, 0.0};
      for (const auto& v : c.vortices()) moment += static_cast<double>(v.sigma) * v.p;
      const auto [x, y] = lattice_coordinates(moment, c.geometry().tau);
      out.moment_xy = std::make_pair(x, y);
      out.psi1_limit = -2.0 * kPi * y;
      out.psi2_limit = 2.0 * kPi * x;
      const cplx tau = c.geometry().tau;
      out.t1 = Vec3{1.0 / eps, 0.0, *out.psi1_limit};
      out.t2 = Vec3{tau.real() / eps, tau.imag() / eps, *out.psi2_limit};
      out.quotient_genus = n + 1;
      out.end_description = "no ends (compact quotient)";
      break;
    }
  }
  return out;
}

SampleGrid sample_grid(const VortexConfig& c, int cells, double radius, double exclusion) {
  require_supported(c);
  if (cells < 1) throw Error(ErrorKind::InvalidGrid, "grid needs at least one cell");
  if (c.empty()) throw Error(ErrorKind::InvalidGrid, "configuration has no vortices");
  SampleGrid g;
  g.cells = cells;
  const double sep = min_pair_distance(c);
  if (c.geometry().kind == GeometryKind::Finite) {
    g.center = centroid(c);
    double spread = 0.0;
    for (const auto& v : c.vortices()) spread = std::max(spread, std::abs(v.p - g.center));
    g.radius = radius > 0.0 ? radius : (c.size() == 1 ? 1.0 : 1.5 * spread + sep);
  } else {
    double mean_y = 0.0;
    double spread = 0.0;
    for (const auto& v : c.vortices()) mean_y += v.p.imag();
    mean_y /= static_cast<double>(c.size());
    for (const auto& v : c.vortices()) spread = std::max(spread, std::abs(v.p.imag() - mean_y));
    g.center = {0.5, mean_y};
    g.radius = radius > 0.0 ? radius : std::max(1.0, 1.5 * spread + 0.5);
  }
  g.exclusion = exclusion > 0.0 ? exclusion : 0.05 * (c.size() == 1 ? g.radius : sep);
  g.spacing = 2.0 * g.radius / cells;
  // Irrational sub-cell offsets keep vortices off grid lines.
  const cplx offset{0.5 * (std::sqrt(2.0) - 1.0), 0.5 * (std::sqrt(3.0) - 1.5)};
  g.origin = g.center - cplx{g.radius, g.radius} + g.spacing * offset;
  return g;
}

std::vector<cplx> tree_path(const SampleGrid& g, int i, int j) {
  std::vector<cplx> path;
  for (int a = 0; a <= i; ++a) path.push_back(g.vertex(a, 0));
  for (int b = 1; b <= j; ++b) path.push_back(g.vertex(i, b));
  return path;
}

std::vector<double> tree_heights(const SampleGrid& g, const VortexConfig& c) {
  const int side = g.cells + 1;
  std::vector<double> h(static_cast<std::size_t>(side) * side);
  h[0] = multigraph_base(g.vertex(0, 0), c);
  for (int i = 1; i < side; ++i) h[i] = h[i - 1] + multigraph_increment(g.vertex(i - 1, 0), g.vertex(i, 0), c);
  for (int i = 0; i < side; ++i) {
    for (int j = 1; j < side; ++j) {
      h[j * side + i] = h[(j - 1) * side + i] + multigraph_increment(g.vertex(i, j - 1), g.vertex(i, j), c);
    }
  }
  return h;
}

Mesh export_mesh(const VortexConfig& c, const MeshSettings& s) {
  if (s.grid < 1 || s.grid > 4096) throw Error(ErrorKind::InvalidGrid, "grid must lie in [1, 4096]");
  if (s.turns < 1) throw Error(ErrorKind::InvalidGrid, "turns must be at least 1");
  if (!(s.eps > 0.0)) throw Error(ErrorKind::InvalidGrid, "eps must be positive");
  if (s.radius < 0.0 || s.exclusion < 0.0) throw Error(ErrorKind::InvalidGrid, "radii must be non-negative");
  Mesh mesh;
  mesh.grid = sample_grid(c, s.grid, s.radius, s.exclusion);
  mesh.turns = s.turns;
  const SampleGrid& g = mesh.grid;
  const auto heights = tree_heights(g, c);
  const auto images = vortex_images(c, g);
  const int side = g.cells + 1;

  struct Tri {
    std::array<cplx, 3> z;
    std::array<double, 3> h;
  };
  std::vector<Tri> kept;
  auto keep = [&](std::array<int, 2> a, std::array<int, 2> b, std::array<int, 2> d) {
    const std::array<cplx, 3> z{g.vertex(a[0], a[1]), g.vertex(b[0], b[1]), g.vertex(d[0], d[1])};
    for (cplx w : z) {
      if (std::abs(w - g.center) > g.radius) return;
      for (cplx p : images) {
        if (std::abs(w - p) <= g.exclusion) return;
      }
    }
    for (cplx p : images) {
      if (in_triangle(p, z[0], z[1], z[2])) return;
    }
    // Heights follow the triangle's own edges from its first vertex so each
    // face lies on a single continuous branch.
    const double h0 = heights[a[1] * side + a[0]];
    kept.push_back({z, {h0, h0 + multigraph_increment(z[0], z[1], c), h0 + multigraph_increment(z[0], z[2], c)}});
  };
  for (int j = 0; j < g.cells; ++j) {
    for (int i = 0; i < g.cells; ++i) {
      keep({i, j}, {i + 1, j}, {i + 1, j + 1});
      keep({i, j}, {i + 1, j + 1}, {i, j + 1});
    }
  }
  mesh.triangles_per_sheet_turn = static_cast<int>(kept.size());

  for (int sheet = 0; sheet < 2; ++sheet) {
    for (int t = 0; t < s.turns; ++t) {
      const double lift = sheet * kPi + 2.0 * kPi * t;
      for (const auto& tri : kept) {
        const int base = static_cast<int>(mesh.vertices.size());
        for (int k = 0; k < 3; ++k) {
          mesh.vertices.push_back({tri.z[k].real() / s.eps, tri.z[k].imag() / s.eps, tri.h[k] + lift});
        }
        mesh.faces.push_back({base, base + 1, base + 2});
        mesh.face_sheet.push_back(sheet);
      }
    }
  }
  for (const auto& v : c.vortices()) {
    for (int t = 0; t < s.turns; ++t) {
      const int base = static_cast<int>(mesh.line_vertices.size());
      mesh.line_vertices.push_back({v.p.real() / s.eps, v.p.imag() / s.eps, 2.0 * kPi * t});
      mesh.line_vertices.push_back({v.p.real() / s.eps, v.p.imag() / s.eps, 2.0 * kPi * (t + 1)});
      mesh.lines.push_back({base, base + 1});
    }
  }
  return mesh;
}

void write_obj(const Mesh& mesh, std::ostream& out) {
  out.precision(17);
  out << "# multigraph limit surface: " << mesh.faces.size() << " faces\n";
  int current = -1;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    if (mesh.face_sheet[f] != current) {
      current = mesh.face_sheet[f];
      out << "o sheet" << current << '\n';
    }
    for (int k : mesh.faces[f]) {
      const auto& v = mesh.vertices[static_cast<std::size_t>(k)];
      out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    }
    const auto& face = mesh.faces[f];
    out << "f " << face[0] + 1 << ' ' << face[1] + 1 << ' ' << face[2] + 1 << '\n';
  }
}

void write_obj_lines(const Mesh& mesh, std::ostream& out) {
  out.precision(17);
  out << "o vortex_lines\n";
  for (const auto& v : mesh.line_vertices) out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& l : mesh.lines) out << "l " << l[0] + 1 << ' ' << l[1] + 1 << '\n';
}

void write_field_csv(const VortexConfig& c, int cells, std::ostream& out, double radius) {
  const SampleGrid g = sample_grid(c, cells, radius);
  out.precision(17);
  out << "x,y,u_re,u_im\n";
  for (int j = 0; j <= g.cells; ++j) {
    for (int i = 0; i <= g.cells; ++i) {
      const cplx z = g.vertex(i, j);
      cplx u;
      try {
        u = flow_field(z, c);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::SingularInput) continue;
        throw;
      }
      out << z.real() << ',' << z.imag() << ',' << u.real() << ',' << u.imag() << '\n';
    }
  }
}

}  // namespace vcl
