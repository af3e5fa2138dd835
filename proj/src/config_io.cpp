#include <cmath>
#include <set>

#include "json.hpp"
#include "vcl/config.hpp"
#include "vcl/error.hpp"

namespace vcl {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Schema, path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) schema(path + "." + it.key(), "unknown field");
  }
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(path + "." + key, "missing required field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

cplx complex_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema(path, "expected [re, im]");
  return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) schema(path, "expected a boolean");
  return j.get<bool>();
}

Geometry parse_geometry(const json& j) {
  if (!j.is_object()) schema("geometry", "expected an object");
  const json& kind = field(j, "kind", "geometry");
  if (!kind.is_string()) schema("geometry.kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "finite") {
    reject_unknown(j, "geometry", {"kind"});
    return Geometry::finite();
  }
  if (k == "singly") {
    reject_unknown(j, "geometry", {"kind"});
    return Geometry::singly();
  }
  if (k == "doubly") {
    reject_unknown(j, "geometry", {"kind", "tau"});
    return Geometry::doubly(complex_pair(field(j, "tau", "geometry"), "geometry.tau"));
  }
  schema("geometry.kind", "expected one of finite, singly, doubly");
}

std::vector<Vortex> parse_vortices(const json& j) {
  if (!j.is_array()) schema("vortices", "expected an array");
  if (j.empty()) schema("vortices", "at least one vortex is required");
  std::vector<Vortex> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string path = "vortices[" + std::to_string(k) + "]";
    const json& v = j[k];
    if (!v.is_object()) schema(path, "expected an object");
    reject_unknown(v, path, {"p", "sigma"});
    const cplx p = complex_pair(field(v, "p", path), path + ".p");
    const double s = number(field(v, "sigma", path), path + ".sigma");
    if (s != std::floor(s) || std::abs(s) > 1e9) {
      throw Error(ErrorKind::InvariantViolation, path + ".sigma: circulation must be +1 or -1");
    }
    out.push_back({p, static_cast<int>(s)});
  }
  return out;
}

Motion parse_motion(const json& j) {
  if (!j.is_object()) schema("motion", "expected an object");
  reject_unknown(j, "motion", {"v", "omega"});
  Motion m;
  m.v = complex_pair(field(j, "v", "motion"), "motion.v");
  if (j.contains("omega")) m.omega = number(j["omega"], "motion.omega");
  return m;
}

SymmetryGroup parse_symmetry(const json& j) {
  if (!j.is_object()) schema("symmetry", "expected an object");
  reject_unknown(j, "symmetry", {"generators"});
  const json& gens = field(j, "generators", "symmetry");
  if (!gens.is_array()) schema("symmetry.generators", "expected an array");
  SymmetryGroup group;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const std::string path = "symmetry.generators[" + std::to_string(k) + "]";
    const json& e = gens[k];
    if (!e.is_object()) schema(path, "expected an object");
    reject_unknown(e, path, {"kind", "conjugate", "a", "b", "circulation_preserving"});
    const json& kind = field(e, "kind", path);
    if (!kind.is_string()) schema(path + ".kind", "expected a string");
    SymmetryElement el;
    const auto ks = kind.get<std::string>();
    if (ks == "rotation") {
      el.map.kind = Isometry::Kind::Rotation;
    } else if (ks == "reflection") {
      el.map.kind = Isometry::Kind::Reflection;
    } else if (ks == "translation") {
      el.map.kind = Isometry::Kind::Translation;
    } else {
      schema(path + ".kind", "expected rotation, reflection or translation");
    }
    el.map.conjugate = boolean(field(e, "conjugate", path), path + ".conjugate");
    el.map.a = complex_pair(field(e, "a", path), path + ".a");
    el.map.b = complex_pair(field(e, "b", path), path + ".b");
    if (std::abs(std::abs(el.map.a) - 1.0) > 1e-9) schema(path + ".a", "linear part must have modulus 1");
    el.circulation_preserving =
        boolean(field(e, "circulation_preserving", path), path + ".circulation_preserving");
    group.generators.push_back(el);
  }
  return group;
}

ojson pair_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

std::string_view kind_name(Isometry::Kind k) {
  switch (k) {
    case Isometry::Kind::Rotation: return "rotation";
    case Isometry::Kind::Reflection: return "reflection";
    case Isometry::Kind::Translation: return "translation";
  }
  return "rotation";
}

}  // namespace

ConfigDocument parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Schema, std::string("document: ") + e.what());
  }
  if (!root.is_object()) schema("document", "expected a JSON object");
  reject_unknown(root, "document", {"geometry", "vortices", "motion", "symmetry"});

  const Geometry geometry = parse_geometry(field(root, "geometry", "document"));
  ConfigDocument doc{VortexConfig(geometry, parse_vortices(field(root, "vortices", "document"))),
                     std::nullopt, std::nullopt};
  if (root.contains("motion")) {
    doc.motion = parse_motion(root["motion"]);
    if (geometry.periodic() && doc.motion->omega != 0.0) {
      throw Error(ErrorKind::InvariantViolation,
                  "motion.omega: periodic geometries admit no rotation (omega must be 0)");
    }
  }
  if (root.contains("symmetry")) doc.symmetry = parse_symmetry(root["symmetry"]);
  return doc;
}

std::string serialize_config(const VortexConfig& c, const std::optional<Motion>& m,
                             const std::optional<SymmetryGroup>& symmetry) {
  ojson root;
  ojson geom;
  switch (c.geometry().kind) {
    case GeometryKind::Finite: geom["kind"] = "finite"; break;
    case GeometryKind::SinglyPeriodic: geom["kind"] = "singly"; break;
    case GeometryKind::DoublyPeriodic:
      geom["kind"] = "doubly";
      geom["tau"] = pair_json(c.geometry().tau);
      break;
  }
  root["geometry"] = geom;
  ojson vortices = ojson::array();
  for (const auto& v : c.vortices()) {
    ojson entry;
    entry["p"] = pair_json(v.p);
    entry["sigma"] = v.sigma;
    vortices.push_back(entry);
  }
  root["vortices"] = vortices;
  if (m) {
    ojson motion;
    motion["v"] = pair_json(m->v);
    motion["omega"] = m->omega;
    root["motion"] = motion;
  }
  if (symmetry) {
    ojson gens = ojson::array();
    for (const auto& e : symmetry->generators) {
      ojson entry;
      entry["kind"] = kind_name(e.map.kind);
      entry["conjugate"] = e.map.conjugate;
      entry["a"] = pair_json(e.map.a);
      entry["b"] = pair_json(e.map.b);
      entry["circulation_preserving"] = e.circulation_preserving;
      gens.push_back(entry);
    }
    root["symmetry"]["generators"] = gens;
  }
  return root.dump(2) + "\n";
}

}  // namespace vcl
