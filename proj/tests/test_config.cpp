#include <functional>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "vcl/balance.hpp"
#include "vcl/catalog.hpp"
#include "vcl/config.hpp"
#include "vcl/error.hpp"

using vcl::cplx;
using vcl::ErrorKind;
using vcl::Geometry;

namespace {

constexpr cplx I{0.0, 1.0};

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const vcl::Error& e) {
    return e.kind();
  }
  FAIL("expected vcl::Error");
  return ErrorKind::Io;
}

double max_position_gap(const vcl::VortexConfig& a, const vcl::VortexConfig& b) {
  REQUIRE(a.size() == b.size());
  double gap = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.vortices()[k].sigma == b.vortices()[k].sigma);
    gap = std::max(gap, std::abs(a.vortices()[k].p - b.vortices()[k].p));
  }
  return gap;
}

cplx moment(const vcl::VortexConfig& c) {
  cplx s{0.0, 0.0};
  for (const auto& v : c.vortices()) s += static_cast<double>(v.sigma) * v.p;
  return s;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("serialize then parse is the identity") {
    std::mt19937_64 rng(20240517);
    for (int trial = 0; trial < 60; ++trial) {
      const Geometry g = gen::geometry(rng);
      const auto c = gen::config(rng, g, 1 + trial % 7);
      const vcl::Motion m{gen::point(rng, 2.0), trial % 2 && !g.periodic() ? 0.37 * trial : 0.0};
      const auto doc = vcl::parse_config(vcl::serialize_config(c, m));
      CHECK(doc.config.geometry() == g);
      CHECK(max_position_gap(doc.config, c) == 0.0);
      REQUIRE(doc.motion);
      CHECK(doc.motion->v == m.v);
      CHECK(doc.motion->omega == m.omega);
      CHECK_FALSE(doc.symmetry);
    }
  }

  TEST_CASE("symmetry groups survive a round trip") {
    const auto [c, m] = vcl::adler_moser_config(2);
    const auto group = vcl::adler_moser_symmetry();
    const auto doc = vcl::parse_config(vcl::serialize_config(c, m, group));
    REQUIRE(doc.symmetry);
    REQUIRE(doc.symmetry->generators.size() == group.generators.size());
    for (std::size_t k = 0; k < group.generators.size(); ++k) {
      const auto& a = doc.symmetry->generators[k];
      const auto& b = group.generators[k];
      CHECK(a.map.conjugate == b.map.conjugate);
      CHECK(a.map.a == b.map.a);
      CHECK(a.map.b == b.map.b);
      CHECK(a.circulation_preserving == b.circulation_preserving);
    }
  }

  TEST_CASE("schema violations name the field") {
    const auto schema_message = [](const char* text) {
      try {
        vcl::parse_config(text);
      } catch (const vcl::Error& e) {
        CHECK(e.kind() == ErrorKind::Schema);
        return std::string(e.what());
      }
      FAIL("expected a schema error");
      return std::string();
    };
    CHECK(schema_message("{").find("document") != std::string::npos);
    CHECK(schema_message(R"({"vortices": []})").find("geometry") != std::string::npos);
    CHECK(schema_message(R"({"geometry": {"kind": "finite"}, "vortices": []})").find("vortices") !=
          std::string::npos);
    CHECK(schema_message(R"({"geometry": {"kind": "finite"}, "vortices": [{"p": [0], "sigma": 1}]})")
              .find("vortices[0].p") != std::string::npos);
    CHECK(schema_message(R"({"geometry": {"kind": "finite"}, "vortices": [{"p": [0, 0], "sigma": 1, "q": 2}]})")
              .find("vortices[0].q") != std::string::npos);
    CHECK(schema_message(R"({"geometry": {"kind": "torus"}, "vortices": [{"p": [0, 0], "sigma": 1}]})")
              .find("geometry.kind") != std::string::npos);
    CHECK(schema_message(R"({"geometry": {"kind": "doubly"}, "vortices": [{"p": [0, 0], "sigma": 1}]})")
              .find("geometry.tau") != std::string::npos);
  }

  TEST_CASE("invalid values raise their own kinds") {
    CHECK(kind_of([] {
            vcl::parse_config(R"({"geometry": {"kind": "finite"}, "vortices": [{"p": [0, 0], "sigma": 2}]})");
          }) == ErrorKind::InvariantViolation);
    CHECK(kind_of([] {
            vcl::parse_config(
                R"({"geometry": {"kind": "doubly", "tau": [0.2, -1]}, "vortices": [{"p": [0, 0], "sigma": 1}]})");
          }) == ErrorKind::InvalidModulus);
    CHECK(kind_of([] {
            vcl::VortexConfig(Geometry::finite(), {{{0.3, 0.1}, 1}, {{0.3, 0.1}, -1}});
          }) == ErrorKind::CoincidentVortices);
    // Coincidence modulo the lattice counts too.
    CHECK(kind_of([] {
            vcl::VortexConfig(Geometry::singly(), {{{0.25, 0.1}, 1}, {{1.25, 0.1}, -1}});
          }) == ErrorKind::CoincidentVortices);
  }

  TEST_CASE("periodic positions are stored in the fundamental domain") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
      const cplx tau = gen::tau(rng);
      const Geometry g = Geometry::doubly(tau);
      const cplx p = gen::point(rng, 5.0);
      const vcl::VortexConfig c(g, {{p, 1}});
      const auto [x, y] = vcl::lattice_coordinates(c.vortices()[0].p, tau);
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
      CHECK(y >= 0.0);
      CHECK(y < 1.0);
      // Same point modulo the lattice.
      const auto [dx, dy] = vcl::lattice_coordinates(c.vortices()[0].p - p, tau);
      CHECK(std::abs(dx - std::round(dx)) < 1e-12);
      CHECK(std::abs(dy - std::round(dy)) < 1e-12);
    }
  }

  TEST_CASE("normalize is idempotent on catalog crystals") {
    const std::vector<vcl::Crystal> crystals{
        vcl::vortex_pair(),          vcl::thomson(5),          vcl::thomson(4, -1),
        vcl::hermite_config(6),      vcl::interlaced_hermite(2), vcl::nested_polygons(2),
        vcl::adler_moser_config(2),  vcl::karman_street(0.3),  vcl::karman_street(0.4, false),
        vcl::doubly_dipole({0.2, 1.1}, {0.4, 0.3}), vcl::polygon_with_center(3, -1)};
    for (const auto& [c, m] : crystals) {
      const auto [c1, m1] = vcl::normalize(c, m);
      const auto [c2, m2] = vcl::normalize(c1, m1);
      CHECK(max_position_gap(c1, c2) < 1e-13);
      CHECK(std::abs(m1.v - m2.v) < 1e-13);
      CHECK(std::abs(m1.omega - m2.omega) < 1e-13);
      CHECK(vcl::sup_norm(vcl::residual(c1, m1)) < 1e-10);
    }
  }

  TEST_CASE("normalized pair has the translating moment") {
    const auto [c, m] = vcl::vortex_pair();
    const auto [cn, mn] = vcl::normalize(c, m);
    CHECK(mn.v == cplx{1.0, 0.0});
    const double n = 2.0;
    CHECK(std::abs(moment(cn) - (-n / (4.0 * oracle::kPi * I))) < 1e-15);
    CHECK(vcl::sup_norm(vcl::residual(cn, mn)) < 1e-14);
  }

  TEST_CASE("normalized rotating crystals satisfy the moment identities") {
    for (const auto& [c, m] : {vcl::thomson(6), vcl::hermite_config(7), vcl::interlaced_hermite(3),
                               vcl::nested_polygons(3, true), vcl::thomson(3, -1)}) {
      const auto [cn, mn] = vcl::normalize(c, m);
      CHECK(std::abs(std::abs(mn.omega) - 1.0) == 0.0);
      const auto r = vcl::moment_check(cn, mn);
      CHECK(std::abs(r.first) < 1e-12);
      CHECK(std::abs(r.second) < 1e-12);
    }
  }

  TEST_CASE("detected symmetries permute the vortices") {
    for (int n = 2; n <= 8; ++n) {
      const auto [c, m] = vcl::thomson(n);
      const auto group = vcl::detect_symmetries(c);
      CHECK(group.order() == static_cast<std::size_t>(2 * n));
      for (const auto& el : group.generators) CHECK(vcl::symmetry_permutation(c, el).has_value());
    }
    const auto [am, mm] = vcl::adler_moser_config(3);
    const auto group = vcl::detect_symmetries(am);
    CHECK(group.order() >= 4);
    for (const auto& el : group.generators) {
      const auto perm = vcl::symmetry_permutation(am, el);
      REQUIRE(perm);
      for (std::size_t k = 0; k < perm->size(); ++k) {
        const int s = am.vortices()[k].sigma;
        const int t = am.vortices()[(*perm)[k]].sigma;
        CHECK(t == (el.circulation_preserving ? s : -s));
      }
    }
  }

  TEST_CASE("generic configurations have no symmetries") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const auto c = gen::config(rng, Geometry::finite(), 5);
      CHECK(vcl::detect_symmetries(c).empty());
    }
  }

  TEST_CASE("wrong circulation action is not a symmetry") {
    const auto [c, m] = vcl::thomson(4);
    vcl::SymmetryElement quarter{vcl::Isometry::rotation(0.0, oracle::kPi / 2.0), false};
    CHECK_FALSE(vcl::symmetry_permutation(c, quarter).has_value());
    quarter.circulation_preserving = true;
    CHECK(vcl::symmetry_permutation(c, quarter).has_value());
  }
}
