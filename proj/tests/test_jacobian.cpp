#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "vcl/balance.hpp"
#include "vcl/catalog.hpp"
#include "vcl/error.hpp"
#include "vcl/jacobian.hpp"

using vcl::cplx;
using vcl::Geometry;

namespace {

constexpr cplx I{0.0, 1.0};

std::vector<vcl::Crystal> catalog_instances() {
  std::vector<vcl::Crystal> out{vcl::vortex_pair(), vcl::karman_street(0.3), vcl::karman_street(0.5, false),
                                vcl::doubly_dipole({0.0, 1.0}, {0.5, 0.5}), vcl::doubly_dipole({0.3, 0.9}, {0.2, 0.4}),
                                vcl::polygon_with_center(4, 1), vcl::polygon_with_center(3, 1)};
  for (int n = 2; n <= 9; ++n) out.push_back(vcl::thomson(n));
  for (int n : {3, 10, 20}) out.push_back(vcl::hermite_config(n));
  for (int m = 1; m <= 4; ++m) out.push_back(vcl::interlaced_hermite(m));
  for (int k = 1; k <= 3; ++k) {
    out.push_back(vcl::nested_polygons(k));
    out.push_back(vcl::nested_polygons(k, true));
  }
  for (int j = 1; j <= 3; ++j) out.push_back(vcl::adler_moser_config(j));
  return out;
}

Eigen::VectorXd real_vector(const std::vector<cplx>& dp) {
  Eigen::VectorXd x(2 * static_cast<Eigen::Index>(dp.size()));
  for (std::size_t k = 0; k < dp.size(); ++k) {
    x(2 * k) = dp[k].real();
    x(2 * k + 1) = dp[k].imag();
  }
  return x;
}

}  // namespace

TEST_SUITE("jacobian") {
  TEST_CASE("analytic Jacobian matches central differences on the catalog") {
    for (const auto& [c, m] : catalog_instances()) {
      const Eigen::MatrixXd a = vcl::analytic_jacobian(c, m);
      const Eigen::MatrixXd f = vcl::numeric_jacobian(c, m);
      const double scale = a.cwiseAbs().maxCoeff();
      CHECK((a - f).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
  }

  TEST_CASE("analytic Jacobian matches central differences on random configurations") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
      const Geometry g = gen::geometry(rng);
      const auto c = gen::config(rng, g, 2 + trial % 6, 0.2);
      const vcl::Motion m{gen::point(rng, 1.0), g.periodic() ? 0.0 : 0.7};
      const Eigen::MatrixXd a = vcl::analytic_jacobian(c, m);
      const Eigen::MatrixXd f = vcl::numeric_jacobian(c, m);
      CHECK((a - f).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  TEST_CASE("rigid perturbations are annihilated") {
    SUBCASE("translating and periodic: uniform translations") {
      for (const auto& [c, m] : {vcl::vortex_pair(), vcl::adler_moser_config(2), vcl::karman_street(0.3),
                                 vcl::doubly_dipole({0.2, 1.2}, {0.3, 0.5})}) {
        const Eigen::MatrixXd j = vcl::analytic_jacobian(c, m);
        const std::size_t n = c.size();
        CHECK((j * real_vector(std::vector<cplx>(n, 1.0))).norm() < 1e-10);
        CHECK((j * real_vector(std::vector<cplx>(n, I))).norm() < 1e-10);
      }
    }
    SUBCASE("rotating: rotation about the origin") {
      for (const auto& [c, m] : {vcl::thomson(6), vcl::hermite_config(9), vcl::nested_polygons(2)}) {
        std::vector<cplx> dp;
        for (const auto& v : c.vortices()) dp.push_back(I * v.p);
        CHECK((vcl::analytic_jacobian(c, m) * real_vector(dp)).norm() < 1e-10);
      }
    }
    SUBCASE("stationary: translations, rotation and scaling") {
      const auto [c, m] = vcl::polygon_with_center(3, 1);
      const Eigen::MatrixXd j = vcl::analytic_jacobian(c, m);
      std::vector<cplx> rot;
      std::vector<cplx> dil;
      for (const auto& v : c.vortices()) {
        rot.push_back(I * v.p);
        dil.push_back(v.p);
      }
      CHECK((j * real_vector(std::vector<cplx>(c.size(), 1.0))).norm() < 1e-10);
      CHECK((j * real_vector(std::vector<cplx>(c.size(), I))).norm() < 1e-10);
      CHECK((j * real_vector(rot)).norm() < 1e-10);
      CHECK((j * real_vector(dil)).norm() < 1e-10);
    }
  }

  TEST_CASE("trivial motions span the forced kernel") {
    for (const auto& [c, m] : catalog_instances()) {
      const auto cls = vcl::classify(c, m, 1e-10);
      const Eigen::MatrixXd t = vcl::trivial_motions(c, m, cls);
      CHECK((t.transpose() * t - Eigen::MatrixXd::Identity(t.cols(), t.cols())).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((vcl::analytic_jacobian(c, m) * t).cwiseAbs().maxCoeff() < 1e-9);
    }
  }

  TEST_CASE("Thomson ranks") {
    for (int n = 2; n <= 9; ++n) {
      const auto [c, m] = vcl::thomson(n);
      const auto r = vcl::rank_report(c, m, vcl::classify(c, m));
      CHECK(r.max_possible_rank == 2 * n - 1);
      if (n == 7) {
        CHECK(r.rank < 2 * n - 1);
        CHECK_FALSE(r.nondegenerate);
      } else {
        CHECK(r.rank == 2 * n - 1);
        CHECK(r.nondegenerate);
      }
    }
    const auto [c, m] = vcl::thomson(7);
    const auto group = vcl::detect_symmetries(c);
    REQUIRE(group.order() == 14);
    const auto restricted = vcl::restricted_rank_report(c, m, vcl::classify(c, m), group);
    CHECK(restricted.nondegenerate);
  }

  TEST_CASE("class-dependent maximum ranks") {
    const auto check = [](const vcl::Crystal& cr, int expected_max) {
      const auto r = vcl::rank_report(cr.first, cr.second, vcl::classify(cr.first, cr.second, 1e-10));
      CHECK(r.max_possible_rank == expected_max);
      CHECK(r.rank + r.null_dim == r.domain_dim);
    };
    check(vcl::vortex_pair(), 2);
    check(vcl::adler_moser_config(2), 2 * 6 - 2);
    check(vcl::karman_street(0.3), 2);
    check(vcl::polygon_with_center(3, 1), 2 * 4 - 4);
    check(vcl::hermite_config(5), 9);
  }

  TEST_CASE("rank is invariant under relabeling and gauge isometries") {
    std::mt19937_64 rng(41);
    for (const auto& [c, m] : {vcl::thomson(7), vcl::hermite_config(6), vcl::interlaced_hermite(3),
                               vcl::adler_moser_config(3), vcl::karman_street(0.35)}) {
      const auto cls = vcl::classify(c, m, 1e-10);
      const int base = vcl::rank_report(c, m, cls).rank;
      std::vector<vcl::Vortex> vs = c.vortices();
      std::shuffle(vs.begin(), vs.end(), rng);
      const vcl::VortexConfig permuted(c.geometry(), vs);
      CHECK(vcl::rank_report(permuted, m, cls).rank == base);
      // Rotation about the origin preserves rotating crystals; translation
      // preserves the others.
      std::vector<cplx> moved;
      const cplx shift = gen::point(rng, 0.5);
      const cplx rot = std::polar(1.0, 0.73);
      for (const auto& v : c.vortices()) {
        moved.push_back(cls.kind == vcl::CrystalClass::Kind::Rotating ? rot * v.p : v.p + shift);
      }
      CHECK(vcl::rank_report(c.with_positions(moved), m, cls).rank == base);
    }
  }

  TEST_CASE("unbalanced input is rejected") {
    const auto [c, m] = vcl::thomson(5);
    auto p = c.positions();
    p[2] += cplx{1e-3, 0.0};
    try {
      vcl::rank_report(c.with_positions(p), m, vcl::classify(c, m));
      FAIL("expected not-balanced");
    } catch (const vcl::Error& e) {
      CHECK(e.kind() == vcl::ErrorKind::NotBalanced);
    }
  }

  TEST_CASE("invariant subspace") {
    const auto [c, m] = vcl::thomson(5);
    const auto group = vcl::detect_symmetries(c);
    const Eigen::MatrixXd b = vcl::invariant_subspace(c, group);
    // D5 acting on a pentagon leaves only the radial breathing mode.
    CHECK(b.cols() == 1);
    CHECK((b.transpose() * b - Eigen::MatrixXd::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff() < 1e-12);

    vcl::SymmetryGroup bogus;
    bogus.generators.push_back({vcl::Isometry::rotation(0.0, 0.5), true});
    try {
      vcl::invariant_subspace(c, bogus);
      FAIL("expected not-a-symmetry");
    } catch (const vcl::Error& e) {
      CHECK(e.kind() == vcl::ErrorKind::NotASymmetry);
    }
  }
}
