#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "vcl/balance.hpp"
#include "vcl/catalog.hpp"
#include "vcl/error.hpp"

using vcl::cplx;
using vcl::Geometry;

namespace {

constexpr cplx I{0.0, 1.0};

std::vector<cplx> transformed(const vcl::VortexConfig& c, const std::function<cplx(cplx)>& f) {
  std::vector<cplx> p;
  for (const auto& v : c.vortices()) p.push_back(f(v.p));
  return p;
}

}  // namespace

TEST_SUITE("balance") {
  TEST_CASE("finite interaction sums match the direct sum") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      const auto c = gen::config(rng, Geometry::finite(), 2 + trial % 9);
      const auto got = vcl::interaction_sums(c);
      const auto want = oracle::finite_interactions(c.positions(), c.circulations());
      for (std::size_t j = 0; j < got.size(); ++j) {
        CHECK(std::abs(got[j] - want[j]) <= 1e-13 * (1.0 + std::abs(want[j])));
      }
    }
  }

  TEST_CASE("singly periodic sums match the image sum") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
      const auto c = gen::config(rng, Geometry::singly(), 2 + trial % 5);
      const auto p = c.positions();
      const auto s = c.circulations();
      const auto got = vcl::interaction_sums(c);
      for (std::size_t j = 0; j < p.size(); ++j) {
        cplx want{0.0, 0.0};
        for (std::size_t k = 0; k < p.size(); ++k) {
          if (k != j) want += static_cast<double>(s[k]) * oracle::cot_series(p[j] - p[k], 200000);
        }
        want /= 2.0 * oracle::kPi * I;
        CHECK(std::abs(got[j] - want) < 1e-8);
      }
    }
  }

  TEST_CASE("residual is permutation equivariant") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
      const Geometry g = gen::geometry(rng);
      const auto c = gen::config(rng, g, 6);
      const vcl::Motion m{gen::point(rng, 1.0), g.periodic() ? 0.0 : 0.3};
      std::vector<vcl::Vortex> shuffled = c.vortices();
      std::vector<std::size_t> order(shuffled.size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t k = 0; k < order.size(); ++k) shuffled[k] = c.vortices()[order[k]];
      const auto a = vcl::residual(c, m);
      const auto b = vcl::residual(vcl::VortexConfig(g, shuffled), m);
      for (std::size_t k = 0; k < order.size(); ++k) CHECK(std::abs(b[k] - a[order[k]]) < 1e-12);
    }
  }

  TEST_CASE("rotating crystals: rotation and scaling laws") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * oracle::kPi);
    std::uniform_real_distribution<double> scale(0.3, 3.0);
    for (const auto& [c, m] : {vcl::thomson(5), vcl::hermite_config(8), vcl::interlaced_hermite(2),
                               vcl::nested_polygons(2)}) {
      REQUIRE(std::abs(m.v) < 1e-14);
      const double base = vcl::sup_norm(vcl::residual(c, m));
      for (int trial = 0; trial < 5; ++trial) {
        const cplx rot = std::polar(1.0, angle(rng));
        const auto rc = c.with_positions(transformed(c, [&](cplx z) { return rot * z; }));
        CHECK(std::abs(vcl::sup_norm(vcl::residual(rc, m)) - base) < 1e-13);
        const double s = scale(rng);
        const auto sc = c.with_positions(transformed(c, [&](cplx z) { return s * z; }));
        const vcl::Motion sm{0.0, m.omega / (s * s)};
        CHECK(vcl::sup_norm(vcl::residual(sc, sm)) < 1e-12 / std::min(s, 1.0));
      }
    }
  }

  TEST_CASE("translation invariance for translating and periodic crystals") {
    std::mt19937_64 rng(15);
    for (const auto& [c, m] : {vcl::vortex_pair(), vcl::adler_moser_config(2), vcl::karman_street(0.25),
                               vcl::doubly_dipole({0.1, 1.3}, {0.3, 0.6})}) {
      const double base = vcl::sup_norm(vcl::residual(c, m));
      for (int trial = 0; trial < 5; ++trial) {
        const cplx shift = gen::point(rng, 3.0);
        const auto moved = c.with_positions(transformed(c, [&](cplx z) { return z + shift; }));
        CHECK(std::abs(vcl::sup_norm(vcl::residual(moved, m)) - base) < 1e-12);
      }
    }
  }

  TEST_CASE("inferred motion of regular polygons") {
    // sum_{k=1}^{n-1} 1/(1 - w^k) = (n-1)/2 gives omega = (n-1)/(4 pi) on the unit circle.
    for (int n = 2; n <= 9; ++n) {
      std::vector<vcl::Vortex> vs;
      for (int k = 0; k < n; ++k) vs.push_back({std::polar(1.0, 2.0 * oracle::kPi * k / n), 1});
      const vcl::VortexConfig c(Geometry::finite(), vs);
      const auto m = vcl::infer_motion(c);
      CHECK(std::abs(m.omega - (n - 1) / (4.0 * oracle::kPi)) < 1e-12);
      CHECK(std::abs(m.v) < 1e-12);
      CHECK(vcl::sup_norm(vcl::residual(c, m)) < 1e-13);
    }
  }

  TEST_CASE("moment identities hold for balanced finite crystals") {
    for (const auto& [c, m] : {vcl::vortex_pair(), vcl::thomson(7), vcl::thomson(4, -1), vcl::hermite_config(12),
                               vcl::interlaced_hermite(4), vcl::nested_polygons(4, true),
                               vcl::adler_moser_config(3), vcl::polygon_with_center(3, -1),
                               vcl::polygon_with_center(3, 1)}) {
      const auto r = vcl::moment_check(c, m);
      CHECK(std::abs(r.first) < 1e-12);
      CHECK(std::abs(r.second) < 1e-12);
    }
  }

  TEST_CASE("classification") {
    using K = vcl::CrystalClass::Kind;
    CHECK(vcl::classify(vcl::thomson(3).first, vcl::thomson(3).second).kind == K::Rotating);
    CHECK(vcl::classify(vcl::vortex_pair().first, vcl::vortex_pair().second).kind == K::Translating);
    const auto [tri, tm] = vcl::polygon_with_center(3, 1);
    const auto cls = vcl::classify(tri, tm, 1e-10);
    CHECK(cls.kind == K::Stationary);
    CHECK(cls.m * cls.m == cls.n);
    // A translating motion with nonzero total circulation is inconsistent.
    const vcl::VortexConfig same(Geometry::finite(), {{{0.0, 0.0}, 1}, {{1.0, 0.0}, 1}});
    try {
      vcl::classify(same, {1.0, 0.0});
      FAIL("expected inconsistent class");
    } catch (const vcl::Error& e) {
      CHECK(e.kind() == vcl::ErrorKind::InconsistentClass);
    }
  }

  TEST_CASE("balance report") {
    const auto [c, m] = vcl::thomson(5);
    const auto good = vcl::balance_report(c, m);
    CHECK(good.balanced);
    REQUIRE(good.crystal_class);
    CHECK(good.moment1_residual.has_value());
    auto p = c.positions();
    p[0] += 1e-6;
    const auto bad = vcl::balance_report(c.with_positions(p), m);
    CHECK_FALSE(bad.balanced);
    CHECK(bad.sup_norm > 1e-8);
    const auto [k, km] = vcl::karman_street(0.3);
    const auto periodic = vcl::balance_report(k, km);
    CHECK(periodic.balanced);
    CHECK_FALSE(periodic.moment1_residual.has_value());
  }

  TEST_CASE("coincident raw positions are rejected") {
    const std::vector<cplx> p{{0.1, 0.2}, {0.1, 0.2}};
    const std::vector<int> s{1, -1};
    try {
      vcl::interaction_sums(Geometry::finite(), p, s);
      FAIL("expected coincident vortices");
    } catch (const vcl::Error& e) {
      CHECK(e.kind() == vcl::ErrorKind::CoincidentVortices);
    }
  }
}
