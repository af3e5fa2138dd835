#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vcl/balance.hpp"
#include "vcl/config.hpp"

namespace vcl {

/// Relative singular-value threshold per unit of 2n.
inline constexpr double kRankTolPerDim = 1e-11;

struct RankReport {
  Eigen::MatrixXd jacobian;
  std::vector<double> singular_values;  // descending
  int rank = 0;
  int null_dim = 0;
  int max_possible_rank = 0;
  /// Dimension of the space the Jacobian acts on: 2n, or the dimension of the
  /// symmetric subspace for restricted reports.
  int domain_dim = 0;
  bool nondegenerate = false;
  double rank_tol = 0.0;  // absolute threshold used
};

/// Real 2n x 2n Jacobian of the residual map in coordinates
/// (Re p1, Im p1, Re p2, ...). Rows follow the same (Re F_j, Im F_j) layout.
Eigen::MatrixXd analytic_jacobian(const VortexConfig& c, const Motion& m);

/// Central differences with step h; the motion is held fixed.
Eigen::MatrixXd numeric_jacobian(const VortexConfig& c, const Motion& m, double h = 1e-6);

/// Real perturbation directions generated by the rigid motions that preserve
/// balance for the given class (translations, rotation about the centre,
/// scaling). Columns are orthonormal.
Eigen::MatrixXd trivial_motions(const VortexConfig& c, const Motion& m, const CrystalClass& cls);

/// rel_tol <= 0 selects the default 2n * kRankTolPerDim.
RankReport rank_report(const VortexConfig& c, const Motion& m, const CrystalClass& cls,
                       double rel_tol = 0.0, double balance_tol = 1e-10);

/// Orthonormal basis of perturbations that commute with every element of G.
/// Throws NotASymmetry if some element does not map c to itself.
Eigen::MatrixXd invariant_subspace(const VortexConfig& c, const SymmetryGroup& group);

RankReport restricted_rank_report(const VortexConfig& c, const Motion& m, const CrystalClass& cls,
                                  const SymmetryGroup& group, double rel_tol = 0.0,
                                  double balance_tol = 1e-10);

}  // namespace vcl
