#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "vcl/balance.hpp"
#include "vcl/catalog.hpp"
#include "vcl/error.hpp"
#include "vcl/solver.hpp"

using vcl::cplx;
using vcl::Geometry;

namespace {

constexpr cplx I{0.0, 1.0};

vcl::VortexConfig perturbed(const vcl::VortexConfig& c, std::mt19937_64& rng, double size) {
  auto p = c.positions();
  for (auto& z : p) z += gen::point(rng, size);
  return c.with_positions(p);
}

cplx position_sum(const vcl::VortexConfig& c) {
  cplx s{0.0, 0.0};
  for (const auto& v : c.vortices()) s += v.p;
  return s;
}

// Largest distance between the integrated positions and the closed-form
// rigid motion at the final sample.
double rigid_error(const vcl::VortexConfig& c, const vcl::Motion& m, const vcl::Trajectory& tr) {
  const double t = tr.times.back();
  double err = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const cplx p0 = c.vortices()[k].p;
    cplx exact;
    if (m.omega != 0.0) {
      // dp/dt = v + i omega p about the centre c0 = i v / omega.
      const cplx c0 = I * m.v / m.omega;
      exact = c0 + (p0 - c0) * std::exp(I * m.omega * t);
    } else {
      exact = p0 + m.v * t;
    }
    err = std::max(err, std::abs(tr.states.back()[k] - exact));
  }
  return err;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("refine recovers perturbed crystals") {
    std::mt19937_64 rng(51);
    for (const auto& [c, m] : {vcl::thomson(5), vcl::hermite_config(8), vcl::interlaced_hermite(2),
                               vcl::nested_polygons(2), vcl::vortex_pair(), vcl::adler_moser_config(2),
                               vcl::karman_street(0.3), vcl::doubly_dipole({0.1, 1.2}, {0.4, 0.5})}) {
      const auto seed = perturbed(c, rng, 1e-4);
      const auto res = vcl::refine(seed, m);
      CHECK(res.report.sup_norm < 1e-13);
      CHECK(res.report.balanced);
      // Solver and balance module agree after re-fitting the motion.
      CHECK(vcl::sup_norm(vcl::residual(res.config, vcl::infer_motion(res.config))) < 1e-12);
    }
  }

  TEST_CASE("gauge constraints hold at the solution") {
    std::mt19937_64 rng(52);
    {
      const auto [c, m] = vcl::hermite_config(7);
      const auto seed = perturbed(c, rng, 1e-4);
      REQUIRE(vcl::resolve_gauge(seed, m, vcl::Gauge::Auto) == vcl::Gauge::Rotating);
      const auto res = vcl::refine(seed, m);
      CHECK(std::abs(res.config.vortices()[0].p.imag() - seed.vortices()[0].p.imag()) < 1e-14);
    }
    {
      const auto [c, m] = vcl::adler_moser_config(2);
      const auto seed = perturbed(c, rng, 1e-4);
      REQUIRE(vcl::resolve_gauge(seed, m, vcl::Gauge::Auto) == vcl::Gauge::Translating);
      const auto res = vcl::refine(seed, m);
      CHECK(std::abs(position_sum(res.config) - position_sum(seed)) < 1e-14);
    }
    {
      const auto [c, m] = vcl::polygon_with_center(3, 1);
      const auto seed = perturbed(c, rng, 1e-5);
      REQUIRE(vcl::resolve_gauge(seed, m, vcl::Gauge::Auto) == vcl::Gauge::Stationary);
      const auto res = vcl::refine(seed, m);
      CHECK(std::abs(res.config.vortices()[0].p - seed.vortices()[0].p) < 1e-14);
      CHECK(std::abs(res.config.vortices()[1].p - seed.vortices()[1].p) < 1e-14);
    }
    CHECK(vcl::resolve_gauge(vcl::karman_street(0.3).first, vcl::karman_street(0.3).second, vcl::Gauge::Auto) ==
          vcl::Gauge::Periodic);
  }

  TEST_CASE("refine reports failure honestly") {
    // Three like-signed vortices on a line with a wrong angular velocity.
    const vcl::VortexConfig c(Geometry::finite(), {{{-1.0, 0.0}, 1}, {{0.0, 0.0}, 1}, {{1.0, 0.0}, 1}});
    vcl::SolveSettings s;
    s.max_iter = 3;
    try {
      vcl::refine(c, {0.0, 5.0}, s);
      FAIL("expected no convergence");
    } catch (const vcl::Error& e) {
      CHECK(e.kind() == vcl::ErrorKind::NoConvergence);
    }
    s.damping = 0.0;
    try {
      vcl::refine(c, {0.0, 5.0}, s);
      FAIL("expected invalid argument");
    } catch (const vcl::Error& e) {
      CHECK(e.kind() == vcl::ErrorKind::InvalidArgument);
    }
  }

  TEST_CASE("symmetric refinement keeps the symmetry") {
    std::mt19937_64 rng(53);
    const auto [c, m] = vcl::thomson(7);
    const auto group = vcl::detect_symmetries(c);
    const auto seed = perturbed(c, rng, 1e-5);
    const auto res = vcl::refine_symmetric(seed, m, group, {}, 1e-4);
    CHECK(res.report.sup_norm < 1e-13);
    for (const auto& el : group.generators) CHECK(vcl::symmetry_permutation(res.config, el, 1e-12).has_value());
  }

  TEST_CASE("symmetrize projects onto the symmetric configurations") {
    std::mt19937_64 rng(54);
    const auto [c, m] = vcl::adler_moser_config(3);
    const auto group = vcl::adler_moser_symmetry();
    const auto sym = vcl::symmetrize(perturbed(c, rng, 1e-7), group);
    for (const auto& el : group.generators) CHECK(vcl::symmetry_permutation(sym, el, 1e-13).has_value());
  }

  TEST_CASE("RK4 follows the rigid motion") {
    for (const auto& [c, m] : {vcl::thomson(7), vcl::vortex_pair(), vcl::hermite_config(4)}) {
      const auto tr = vcl::integrate(c, 1.0, 1e-3, 100);
      CHECK(tr.times.back() == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(vcl::rigidity_drift(tr) < 1e-8);
      CHECK(rigid_error(c, m, tr) < 1e-8);
      CHECK(std::abs(tr.motion_fit.back().omega - m.omega) < 1e-8);
    }
  }

  TEST_CASE("halving the step reduces the error by about 16") {
    const auto [c, m] = vcl::thomson(7);
    const double coarse = rigid_error(c, m, vcl::integrate(c, 1.0, 0.1));
    const double fine = rigid_error(c, m, vcl::integrate(c, 1.0, 0.05));
    const double ratio = coarse / fine;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
  }

  TEST_CASE("collisions abort the integration") {
    const vcl::VortexConfig close(Geometry::finite(), {{{0.0, 0.0}, 1}, {{5e-7, 0.0}, -1}});
    try {
      vcl::integrate(close, 1.0, 0.01);
      FAIL("expected collision abort");
    } catch (const vcl::Error& e) {
      CHECK(e.kind() == vcl::ErrorKind::CollisionAbort);
    }
  }

  TEST_CASE("sweep along the Karman family") {
    const vcl::FamilyGenerator family = [](double b) { return vcl::karman_street(b); };
    const auto steps = vcl::sweep(family, 0.2, 0.6, 5);
    REQUIRE(steps.size() == 5);
    for (const auto& st : steps) {
      CHECK(vcl::sup_norm(vcl::residual(st.config, st.motion)) < 1e-13);
      CHECK(st.rank.nondegenerate);
      CHECK_FALSE(st.rank_changed);
      // Staggered street: |v| = tanh(pi b) / 2.
      CHECK(std::abs(std::abs(st.motion.v) - 0.5 * std::tanh(oracle::kPi * st.param)) < 1e-12);
    }
    CHECK(steps.front().param == 0.2);
    CHECK(steps.back().param == doctest::Approx(0.6).epsilon(1e-15));
  }
}
