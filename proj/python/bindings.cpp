#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vcl/balance.hpp"
#include "vcl/catalog.hpp"
#include "vcl/config.hpp"
#include "vcl/error.hpp"
#include "vcl/jacobian.hpp"
#include "vcl/kernels.hpp"
#include "vcl/solver.hpp"
#include "vcl/surface.hpp"

namespace py = pybind11;
using namespace py::literals;

namespace {

vcl::Geometry make_geometry(const std::string& kind, vcl::cplx tau) {
  if (kind == "finite") return vcl::Geometry::finite();
  if (kind == "singly") return vcl::Geometry::singly();
  if (kind == "doubly") return vcl::Geometry::doubly(tau);
  throw vcl::Error(vcl::ErrorKind::InvalidArgument, "geometry must be finite, singly or doubly");
}

std::string geometry_kind(const vcl::Geometry& g) {
  switch (g.kind) {
    case vcl::GeometryKind::Finite: return "finite";
    case vcl::GeometryKind::SinglyPeriodic: return "singly";
    case vcl::GeometryKind::DoublyPeriodic: return "doubly";
  }
  return "finite";
}

vcl::VortexConfig make_config(const std::vector<vcl::cplx>& positions, const std::vector<int>& sigmas,
                              const std::string& geometry, vcl::cplx tau) {
  if (positions.size() != sigmas.size()) {
    throw vcl::Error(vcl::ErrorKind::InvalidArgument, "positions and sigmas differ in length");
  }
  std::vector<vcl::Vortex> vs;
  for (std::size_t k = 0; k < positions.size(); ++k) vs.push_back({positions[k], sigmas[k]});
  return vcl::VortexConfig(make_geometry(geometry, tau), std::move(vs));
}

py::dict class_dict(const vcl::CrystalClass& c) {
  return py::dict("kind"_a = std::string(vcl::to_string(c.kind)), "n"_a = c.n, "n_plus"_a = c.n_plus,
                  "n_minus"_a = c.n_minus, "m"_a = c.m);
}

py::dict balance_dict(const vcl::BalanceReport& r) {
  py::dict d("residuals"_a = r.residuals, "sup_norm"_a = r.sup_norm, "tol"_a = r.tol, "balanced"_a = r.balanced);
  if (r.moment1_residual) d["moment1_residual"] = *r.moment1_residual;
  if (r.moment2_residual) d["moment2_residual"] = *r.moment2_residual;
  if (r.crystal_class) d["class"] = class_dict(*r.crystal_class);
  return d;
}

py::dict rank_dict(const vcl::RankReport& r) {
  return py::dict("jacobian"_a = r.jacobian, "singular_values"_a = r.singular_values, "rank"_a = r.rank,
                  "null_dim"_a = r.null_dim, "max_possible_rank"_a = r.max_possible_rank,
                  "domain_dim"_a = r.domain_dim, "nondegenerate"_a = r.nondegenerate, "rank_tol"_a = r.rank_tol);
}

vcl::SymmetryGroup group_for(const vcl::VortexConfig& c, const std::string& which) {
  if (which == "detect") return vcl::detect_symmetries(c);
  if (which == "adler-moser") return vcl::adler_moser_symmetry();
  throw vcl::Error(vcl::ErrorKind::InvalidArgument, "symmetry must be 'detect' or 'adler-moser'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Binary point-vortex crystals: balance, rank, refinement, catalog and limit surfaces.";

  py::exception<vcl::Error>(m, "VclError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const vcl::Error& e) {
      // args = (kind, message)
      py::object exc = py::module_::import("vortexcrystal._core").attr("VclError");
      PyErr_SetObject(exc.ptr(), py::make_tuple(std::string(vcl::to_string(e.kind())), e.what()).ptr());
    }
  });

  py::class_<vcl::Motion>(m, "Motion")
      .def(py::init([](vcl::cplx v, double omega) { return vcl::Motion{v, omega}; }), "v"_a = vcl::cplx{},
           "omega"_a = 0.0)
      .def_readwrite("v", &vcl::Motion::v)
      .def_readwrite("omega", &vcl::Motion::omega)
      .def("__repr__", [](const vcl::Motion& mo) {
        std::ostringstream ss;
        ss << "Motion(v=" << mo.v << ", omega=" << mo.omega << ")";
        return ss.str();
      });

  py::class_<vcl::VortexConfig>(m, "VortexConfig")
      .def(py::init(&make_config), "positions"_a, "sigmas"_a, "geometry"_a = "finite", "tau"_a = vcl::cplx{0.0, 1.0})
      .def_property_readonly("positions", &vcl::VortexConfig::positions)
      .def_property_readonly("sigmas", &vcl::VortexConfig::circulations)
      .def_property_readonly("geometry", [](const vcl::VortexConfig& c) { return geometry_kind(c.geometry()); })
      .def_property_readonly("tau", [](const vcl::VortexConfig& c) { return c.geometry().tau; })
      .def("__len__", &vcl::VortexConfig::size)
      .def("with_positions", [](const vcl::VortexConfig& c, const std::vector<vcl::cplx>& p) {
        return c.with_positions(p);
      });

  m.def("upsilon", [](vcl::cplx z, const std::string& geometry, vcl::cplx tau) {
    return vcl::upsilon(z, make_geometry(geometry, tau));
  }, "z"_a, "geometry"_a = "finite", "tau"_a = vcl::cplx{0.0, 1.0});
  m.def("weierstrass_zeta", &vcl::weierstrass_zeta, "z"_a, "tau"_a);

  m.def("parse_config", [](const std::string& text) {
    auto doc = vcl::parse_config(text);
    return py::make_tuple(doc.config, doc.motion ? py::cast(*doc.motion) : py::none());
  }, "text"_a);
  m.def("serialize_config", [](const vcl::VortexConfig& c, std::optional<vcl::Motion> mo) {
    return vcl::serialize_config(c, mo);
  }, "config"_a, "motion"_a = py::none());

  m.def("residual", &vcl::residual, "config"_a, "motion"_a);
  m.def("infer_motion", &vcl::infer_motion, "config"_a);
  m.def("classify", [](const vcl::VortexConfig& c, const vcl::Motion& mo, double tol) {
    return class_dict(vcl::classify(c, mo, tol));
  }, "config"_a, "motion"_a, "tol"_a = vcl::kDefaultBalanceTol);
  m.def("balance_report", [](const vcl::VortexConfig& c, const vcl::Motion& mo, double tol) {
    return balance_dict(vcl::balance_report(c, mo, tol));
  }, "config"_a, "motion"_a, "tol"_a = vcl::kDefaultBalanceTol);
  m.def("normalize", &vcl::normalize, "config"_a, "motion"_a, "tol"_a = 1e-10);

  m.def("jacobian", &vcl::analytic_jacobian, "config"_a, "motion"_a);
  m.def("rank_report", [](const vcl::VortexConfig& c, const vcl::Motion& mo, double rel_tol, double tol) {
    return rank_dict(vcl::rank_report(c, mo, vcl::classify(c, mo, tol), rel_tol, tol));
  }, "config"_a, "motion"_a, "rel_tol"_a = 0.0, "tol"_a = 1e-10);
  m.def("restricted_rank_report",
        [](const vcl::VortexConfig& c, const vcl::Motion& mo, const std::string& symmetry, double rel_tol, double tol) {
          const auto group = group_for(c, symmetry);
          py::dict d = rank_dict(vcl::restricted_rank_report(c, mo, vcl::classify(c, mo, tol), group, rel_tol, tol));
          d["group_order"] = group.order();
          return d;
        },
        "config"_a, "motion"_a, "symmetry"_a = "detect", "rel_tol"_a = 0.0, "tol"_a = 1e-10);

  m.def("refine", [](const vcl::VortexConfig& c, const vcl::Motion& mo, double tol, int max_iter) {
    vcl::SolveSettings s;
    s.tol = tol;
    s.max_iter = max_iter;
    const auto r = vcl::refine(c, mo, s);
    return py::make_tuple(r.config, r.motion, balance_dict(r.report), r.iterations);
  }, "config"_a, "motion"_a, "tol"_a = 1e-13, "max_iter"_a = 50);
  m.def("integrate", [](const vcl::VortexConfig& c, double t_end, double dt, int record_every) {
    const auto tr = vcl::integrate(c, t_end, dt, record_every);
    return py::dict("times"_a = tr.times, "states"_a = tr.states, "rigidity_drift"_a = vcl::rigidity_drift(tr),
                    "motion_fit"_a = tr.motion_fit);
  }, "config"_a, "t_end"_a, "dt"_a, "record_every"_a = 1);

  m.def("vortex_pair", &vcl::vortex_pair);
  m.def("thomson", &vcl::thomson, "n"_a, "sigma"_a = 1);
  m.def("hermite_roots", &vcl::hermite_roots, "n"_a);
  m.def("hermite_config", &vcl::hermite_config, "n"_a);
  m.def("interlaced_hermite", &vcl::interlaced_hermite, "m"_a);
  m.def("polygon_with_center", &vcl::polygon_with_center, "n"_a, "sigma_c"_a);
  m.def("nested_polygon_ratio", &vcl::nested_polygon_ratio, "k"_a, "outer"_a = false);
  m.def("nested_polygons", &vcl::nested_polygons, "k"_a, "outer"_a = false);
  m.def("adler_moser_config", &vcl::adler_moser_config, "j"_a);
  m.def("karman_street", &vcl::karman_street, "b"_a, "staggered"_a = true);
  m.def("doubly_dipole", &vcl::doubly_dipole, "tau"_a, "offset"_a);

  m.def("multigraph_increment", &vcl::multigraph_increment, "a"_a, "b"_a, "config"_a);
  m.def("flow_field", &vcl::flow_field, "z"_a, "config"_a);
  m.def("limit_periods", [](const vcl::VortexConfig& c, const vcl::Motion& mo, double eps, double tol) {
    const auto p = vcl::limit_periods(c, mo, eps, tol);
    py::dict d("eps"_a = p.eps, "nu"_a = p.nu, "t0"_a = p.t0, "quotient_genus"_a = p.quotient_genus,
               "ends"_a = p.end_description);
    if (p.screw_angle) d["screw_angle"] = *p.screw_angle;
    if (p.t1) d["t1"] = *p.t1;
    if (p.t2) d["t2"] = *p.t2;
    if (p.psi1_limit) d["psi1_limit"] = *p.psi1_limit;
    if (p.psi2_limit) d["psi2_limit"] = *p.psi2_limit;
    if (p.moment_xy) d["moment_xy"] = *p.moment_xy;
    return d;
  }, "config"_a, "motion"_a, "eps"_a, "tol"_a = 1e-10);
  m.def("export_mesh", [](const vcl::VortexConfig& c, int grid, int turns, double eps, double radius,
                          double exclusion) {
    vcl::MeshSettings s;
    s.grid = grid;
    s.turns = turns;
    s.eps = eps;
    s.radius = radius;
    s.exclusion = exclusion;
    const auto mesh = vcl::export_mesh(c, s);
    return py::dict("vertices"_a = mesh.vertices, "faces"_a = mesh.faces, "face_sheet"_a = mesh.face_sheet,
                    "triangles_per_sheet_turn"_a = mesh.triangles_per_sheet_turn);
  }, "config"_a, "grid"_a = 64, "turns"_a = 1, "eps"_a = 1.0, "radius"_a = 0.0, "exclusion"_a = 0.0);
}
