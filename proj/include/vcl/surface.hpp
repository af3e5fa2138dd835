#pragma once

// Limit-level data of the minimal surfaces attached to a vortex crystal: the
// multigraph height f(z), the flow field, period vectors and a triangle mesh
// of the rescaled limit surface.

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vcl/config.hpp"

namespace vcl {

/// Paths closer than this to a vortex are rejected.
inline constexpr double kPathClearance = 1e-9;

/// Change of f(z) = sum sigma_i arg(z - p_i) along the segment a -> b. The
/// singly periodic height uses arg sin(pi (z - p_i)) instead.
double multigraph_increment(cplx a, cplx b, const VortexConfig& c);

/// f at the basepoint from principal branches.
double multigraph_base(cplx basepoint, const VortexConfig& c);

/// f continued along the polyline `path` (path[0] is the basepoint) and then
/// to z. An empty path means z is its own basepoint.
double multigraph_height(cplx z, std::span<const cplx> path, const VortexConfig& c);

/// u(z) with conj(u) = (1/2 pi i) sum sigma_k Upsilon(z - p_k).
cplx flow_field(cplx z, const VortexConfig& c);

using Vec3 = std::array<double, 3>;

struct LimitPeriods {
  double eps = 0.0;
  cplx nu{0.0, 0.0};  // -2 pi v
  Vec3 t0{};          // vertical period (rotating: translation part of the screw motion)
  std::optional<double> screw_angle;  // rotating crystals
  std::optional<Vec3> t1;
  std::optional<Vec3> t2;
  std::optional<double> psi1_limit;
  std::optional<double> psi2_limit;
  std::optional<std::pair<double, double>> moment_xy;  // sum sigma p = x + y tau
  int quotient_genus = 0;
  std::string end_description;
};

/// Requires a balanced configuration. Finite stationary crystals have no limit
/// theorem and raise UnsupportedGeometry; doubly periodic ones need m = 0.
LimitPeriods limit_periods(const VortexConfig& c, const Motion& m, double eps,
                           double tol = 1e-10);

struct MeshSettings {
  int grid = 64;           // cells per side of the sampling square
  int turns = 1;           // copies of each sheet shifted by 2 pi
  double radius = 0.0;     // outer radius; <= 0 picks a default
  double exclusion = 0.0;  // r0; <= 0 picks 0.05 * minimum pairwise distance
  double eps = 1.0;        // horizontal coordinates are divided by eps
};

/// Square sampling grid shared by the mesh and the field export; vertex
/// (i, j) sits at origin + spacing * (i + j i), 0 <= i, j <= cells.
struct SampleGrid {
  cplx center;
  cplx origin;
  double spacing = 0.0;
  int cells = 0;
  double radius = 0.0;
  double exclusion = 0.0;

  cplx vertex(int i, int j) const { return origin + spacing * cplx(i, j); }
};

SampleGrid sample_grid(const VortexConfig& c, int cells, double radius = 0.0, double exclusion = 0.0);

/// Grid path used for the height of vertex (i, j): along row 0 from (0, 0)
/// to (i, 0), then up column i.
std::vector<cplx> tree_path(const SampleGrid& g, int i, int j);

/// f at every grid vertex, continued along tree paths; index j * (cells+1) + i.
std::vector<double> tree_heights(const SampleGrid& g, const VortexConfig& c);

struct Mesh {
  SampleGrid grid;
  int turns = 0;
  int triangles_per_sheet_turn = 0;  // kept grid triangles
  std::vector<Vec3> vertices;        // triangle soup: 3 per face
  std::vector<std::array<int, 3>> faces;
  std::vector<int> face_sheet;  // 0 for f, 1 for f + pi
  std::vector<Vec3> line_vertices;
  std::vector<std::array<int, 2>> lines;  // vertical segments over each vortex
};

/// Finite and singly periodic geometries.
Mesh export_mesh(const VortexConfig& c, const MeshSettings& s = {});

/// Wavefront OBJ with one object per sheet.
void write_obj(const Mesh& mesh, std::ostream& out);
/// OBJ with the vertical segments as two-point lines.
void write_obj_lines(const Mesh& mesh, std::ostream& out);

/// CSV rows x,y,u_re,u_im on the sample grid vertices (vortex points skipped).
void write_field_csv(const VortexConfig& c, int cells, std::ostream& out, double radius = 0.0);

}  // namespace vcl
