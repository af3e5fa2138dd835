#include "vcl/balance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "vcl/error.hpp"

namespace vcl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

}  // namespace

std::vector<cplx> interaction_sums(const Geometry& g, std::span<const cplx> positions,
                                   std::span<const int> sigmas) {
  const std::size_t n = positions.size();
  std::vector<cplx> sums(n, cplx{0.0, 0.0});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      cplx u;
      try {
        u = upsilon(positions[j] - positions[k], g);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularInput) throw;
        throw Error(ErrorKind::CoincidentVortices,
                    "vortices " + std::to_string(j) + " and " + std::to_string(k) + " coincide");
      }
      // Upsilon is odd in every geometry.
      sums[j] += static_cast<double>(sigmas[k]) * u;
      sums[k] -= static_cast<double>(sigmas[j]) * u;
    }
  }
  for (auto& s : sums) s /= 2.0 * kPi * kI;
  return sums;
}

std::vector<cplx> interaction_sums(const VortexConfig& c) {
  const auto p = c.positions();
  const auto s = c.circulations();
  return interaction_sums(c.geometry(), p, s);
}

std::vector<cplx> residual(const VortexConfig& c, const Motion& m) {
  auto f = interaction_sums(c);
  const auto& vs = c.vortices();
  for (std::size_t j = 0; j < f.size(); ++j) {
    f[j] += -std::conj(m.v) + kI * m.omega * std::conj(vs[j].p);
  }
  return f;
}

double sup_norm(std::span<const cplx> values) {
  double out = 0.0;
  for (cplx z : values) out = std::max(out, std::abs(z));
  return out;
}

Motion infer_motion(const VortexConfig& c) {
  const auto s = interaction_sums(c);
  const std::size_t n = s.size();
  if (n == 0) return {};
  const bool rotating_allowed = !c.geometry().periodic();
  const int unknowns = rotating_allowed ? 3 : 2;

  // F_j = S_j - u + i omega conj(p_j), u = conj(v); unknowns (Re u, Im u, omega).
  Eigen::MatrixXd a(2 * n, unknowns);
  Eigen::VectorXd b(2 * n);
  const auto& vs = c.vortices();
  for (std::size_t j = 0; j < n; ++j) {
    a(2 * j, 0) = -1.0;
    a(2 * j + 1, 0) = 0.0;
    a(2 * j, 1) = 0.0;
    a(2 * j + 1, 1) = -1.0;
    if (rotating_allowed) {
      const cplx col = kI * std::conj(vs[j].p);
      a(2 * j, 2) = col.real();
      a(2 * j + 1, 2) = col.imag();
    }
    b(2 * j) = -s[j].real();
    b(2 * j + 1) = -s[j].imag();
  }
  const Eigen::MatrixXd normal = a.transpose() * a;
  const Eigen::VectorXd rhs = a.transpose() * b;
  // Minimum-norm solution when omega is undetermined (single vortex at the origin).
  const Eigen::VectorXd x = normal.completeOrthogonalDecomposition().solve(rhs);
  Motion m;
  m.v = std::conj(cplx{x(0), x(1)});
  m.omega = rotating_allowed ? x(2) : 0.0;
  return m;
}

MomentResiduals moment_check(const VortexConfig& c, const Motion& m) {
  if (c.geometry().periodic()) {
    throw Error(ErrorKind::UnsupportedGeometry, "moment identities hold for finite configurations only");
  }
  double sum_sigma = 0.0;
  double sum_sigma_sq = 0.0;
  double sum_sigma_abs2 = 0.0;
  cplx sum_sigma_p{0.0, 0.0};
  for (const auto& v : c.vortices()) {
    sum_sigma += v.sigma;
    sum_sigma_sq += v.sigma * v.sigma;
    sum_sigma_p += static_cast<double>(v.sigma) * v.p;
    sum_sigma_abs2 += v.sigma * std::norm(v.p);
  }
  MomentResiduals r;
  r.first = m.v * sum_sigma + kI * m.omega * sum_sigma_p;
  r.second = std::conj(m.v) * sum_sigma_p - kI * m.omega * sum_sigma_abs2 -
             (sum_sigma * sum_sigma - sum_sigma_sq) / (4.0 * kPi * kI);
  return r;
}

CrystalClass classify(const VortexConfig& c, const Motion& m, double tol) {
  CrystalClass cls;
  cls.n = static_cast<int>(c.size());
  cls.n_plus = c.n_plus();
  cls.n_minus = c.n_minus();
  cls.m = cls.n_plus - cls.n_minus;
  if (std::abs(m.omega) > tol) {
    cls.kind = CrystalClass::Kind::Rotating;
  } else if (std::abs(m.v) > tol) {
    cls.kind = CrystalClass::Kind::Translating;
    if (cls.m != 0) {
      throw Error(ErrorKind::InconsistentClass,
                  "translating crystal requires m = 0 but m = " + std::to_string(cls.m));
    }
  } else {
    cls.kind = CrystalClass::Kind::Stationary;
    if (!c.geometry().periodic() && cls.m * cls.m != cls.n) {
      throw Error(ErrorKind::InconsistentClass,
                  "finite stationary crystal requires m^2 = n but m = " + std::to_string(cls.m) +
                      ", n = " + std::to_string(cls.n));
    }
  }
  return cls;
}

BalanceReport balance_report(const VortexConfig& c, const Motion& m, double tol) {
  BalanceReport r;
  r.tol = tol;
  r.residuals = residual(c, m);
  r.sup_norm = sup_norm(r.residuals);
  r.balanced = r.sup_norm < tol;
  if (!c.geometry().periodic()) {
    const auto mom = moment_check(c, m);
    r.moment1_residual = mom.first;
    r.moment2_residual = mom.second;
  }
  if (r.balanced) r.crystal_class = classify(c, m, tol);
  return r;
}

}  // namespace vcl
