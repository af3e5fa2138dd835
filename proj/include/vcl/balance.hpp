#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vcl/config.hpp"

namespace vcl {

/// Sup-norm threshold for deciding that a configuration is a crystal.
inline constexpr double kDefaultBalanceTol = 1e-12;

/// S_j = (1/2 pi i) sum_{k != j} sigma_k Upsilon(p_j - p_k). The conjugate of
/// S_j is the velocity of vortex j under the point-vortex dynamics.
std::vector<cplx> interaction_sums(const Geometry& g, std::span<const cplx> positions,
                                   std::span<const int> sigmas);
std::vector<cplx> interaction_sums(const VortexConfig& c);

/// F_j = -conj(v) + i omega conj(p_j) + S_j.
std::vector<cplx> residual(const VortexConfig& c, const Motion& m);

double sup_norm(std::span<const cplx> values);

/// Least-squares fit of (v, omega) to the balance equations; omega is held at
/// zero for periodic geometries.
Motion infer_motion(const VortexConfig& c);

struct MomentResiduals {
  cplx first;   // v sum sigma + i omega sum sigma p
  cplx second;  // conj(v) sum sigma p - i omega sum sigma |p|^2 - (m^2 - sum sigma^2)/(4 pi i)
};

/// Finite geometry only.
MomentResiduals moment_check(const VortexConfig& c, const Motion& m);

/// Rotating if |omega| > tol, translating if |v| > tol, stationary otherwise.
/// Throws InconsistentClass when the circulation counts contradict the class.
CrystalClass classify(const VortexConfig& c, const Motion& m, double tol = kDefaultBalanceTol);

struct BalanceReport {
  std::vector<cplx> residuals;
  double sup_norm = 0.0;
  double tol = kDefaultBalanceTol;
  bool balanced = false;
  std::optional<cplx> moment1_residual;  // finite geometry only
  std::optional<cplx> moment2_residual;
  std::optional<CrystalClass> crystal_class;  // set when balanced
};

BalanceReport balance_report(const VortexConfig& c, const Motion& m,
                             double tol = kDefaultBalanceTol);

}  // namespace vcl
