#include "vcl/jacobian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vcl/error.hpp"

namespace vcl {
namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kSubspaceTol = 1e-9;

std::vector<cplx> residual_at(const Geometry& g, std::span<const cplx> p, std::span<const int> s,
                              const Motion& m) {
  auto f = interaction_sums(g, p, s);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] += -std::conj(m.v) + kI * m.omega * std::conj(p[j]);
  return f;
}

// Real 2x2 block of dF = a dp + b conj(dp).
void put_block(Eigen::MatrixXd& out, Eigen::Index row, Eigen::Index col, cplx a, cplx b) {
  const cplx plus = a + b;
  const cplx minus = a - b;
  out(row, col) = plus.real();
  out(row, col + 1) = -minus.imag();
  out(row + 1, col) = plus.imag();
  out(row + 1, col + 1) = minus.real();
}

// Orthonormal basis of the column span of a, numerical rank at rel tol.
Eigen::MatrixXd column_basis(const Eigen::MatrixXd& a) {
  if (a.cols() == 0) return Eigen::MatrixXd(a.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  const double cut = sv.size() > 0 ? kSubspaceTol * std::max(sv(0), 1.0) : 0.0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

// Orthonormal basis of the null space of a (a.cols() columns).
Eigen::MatrixXd null_basis(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  const double cut = sv.size() > 0 ? kSubspaceTol * std::max(sv(0), 1.0) : 0.0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixV().rightCols(a.cols() - r);
}

void require_balanced(const VortexConfig& c, const Motion& m, double tol) {
  const double sup = sup_norm(residual(c, m));
  if (!(sup < tol)) {
    throw Error(ErrorKind::NotBalanced,
                "configuration is not balanced (sup-norm " + std::to_string(sup) + ")");
  }
}

RankReport finish_report(Eigen::MatrixXd jac, const Eigen::MatrixXd& acting, int max_rank,
                         int n, double rel_tol) {
  RankReport r;
  r.domain_dim = static_cast<int>(acting.cols());
  r.max_possible_rank = max_rank;
  if (rel_tol <= 0.0) rel_tol = 2.0 * n * kRankTolPerDim;
  if (acting.cols() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(acting);
    const auto& sv = svd.singularValues();
    r.singular_values.assign(sv.data(), sv.data() + sv.size());
    // A zero map has rank 0 regardless of the relative threshold.
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    r.rank_tol = rel_tol * smax;
    for (double s : r.singular_values) {
      if (s > r.rank_tol && s > 1e-300) ++r.rank;
    }
  }
  r.null_dim = r.domain_dim - r.rank;
  r.nondegenerate = r.rank == r.max_possible_rank;
  r.jacobian = std::move(jac);
  return r;
}

int intersection_dim(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.cols() == 0 || b.cols() == 0) return 0;
  Eigen::MatrixXd both(a.rows(), a.cols() + b.cols());
  both << a, b;
  return static_cast<int>(a.cols() + b.cols() - column_basis(both).cols());
}

}  // namespace

Eigen::MatrixXd analytic_jacobian(const VortexConfig& c, const Motion& m) {
  const auto& vs = c.vortices();
  const auto n = static_cast<Eigen::Index>(vs.size());
  const Geometry& g = c.geometry();
  const cplx inv = 1.0 / (2.0 * std::numbers::pi * kI);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    cplx a_diag{0.0, 0.0};
    cplx b_diag = kI * m.omega;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      WirtingerPair w;
      try {
        w = upsilon_wirtinger(vs[j].p - vs[k].p, g);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularInput) throw;
        throw Error(ErrorKind::CoincidentVortices, "vortices " + std::to_string(j) + " and " +
                                                       std::to_string(k) + " coincide");
      }
      const double s = vs[k].sigma;
      a_diag += inv * s * w.d_z;
      b_diag += inv * s * w.d_zbar;
      put_block(out, 2 * j, 2 * k, -inv * s * w.d_z, -inv * s * w.d_zbar);
    }
    put_block(out, 2 * j, 2 * j, a_diag, b_diag);
  }
  return out;
}

Eigen::MatrixXd numeric_jacobian(const VortexConfig& c, const Motion& m, double h) {
  const auto p0 = c.positions();
  const auto s = c.circulations();
  const auto n = static_cast<Eigen::Index>(p0.size());
  Eigen::MatrixXd out(2 * n, 2 * n);
  for (Eigen::Index col = 0; col < 2 * n; ++col) {
    const cplx step = (col % 2 == 0) ? cplx{h, 0.0} : cplx{0.0, h};
    auto plus = p0;
    auto minus = p0;
    plus[col / 2] += step;
    minus[col / 2] -= step;
    const auto fp = residual_at(c.geometry(), plus, s, m);
    const auto fm = residual_at(c.geometry(), minus, s, m);
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx d = (fp[j] - fm[j]) / (2.0 * h);
      out(2 * j, col) = d.real();
      out(2 * j + 1, col) = d.imag();
    }
  }
  return out;
}

Eigen::MatrixXd trivial_motions(const VortexConfig& c, const Motion& m, const CrystalClass& cls) {
  const auto& vs = c.vortices();
  const auto n = static_cast<Eigen::Index>(vs.size());
  std::vector<std::vector<cplx>> fields;
  auto uniform = [&](cplx d) { fields.emplace_back(vs.size(), d); };
  if (c.geometry().periodic() || cls.kind == CrystalClass::Kind::Translating) {
    uniform(1.0);
    uniform(kI);
  } else if (cls.kind == CrystalClass::Kind::Rotating) {
    const cplx center = m.omega != 0.0 ? kI * m.v / m.omega : cplx{0.0, 0.0};
    std::vector<cplx> rot;
    for (const auto& v : vs) rot.push_back(kI * (v.p - center));
    fields.push_back(std::move(rot));
  } else {
    uniform(1.0);
    uniform(kI);
    std::vector<cplx> scale;
    std::vector<cplx> rot;
    for (const auto& v : vs) {
      scale.push_back(v.p);
      rot.push_back(kI * v.p);
    }
    fields.push_back(std::move(scale));
    fields.push_back(std::move(rot));
  }
  Eigen::MatrixXd t(2 * n, static_cast<Eigen::Index>(fields.size()));
  for (Eigen::Index f = 0; f < t.cols(); ++f) {
    for (Eigen::Index k = 0; k < n; ++k) {
      t(2 * k, f) = fields[f][k].real();
      t(2 * k + 1, f) = fields[f][k].imag();
    }
  }
  return column_basis(t);
}

RankReport rank_report(const VortexConfig& c, const Motion& m, const CrystalClass& cls,
                       double rel_tol, double balance_tol) {
  require_balanced(c, m, balance_tol);
  const int n = static_cast<int>(c.size());
  const Eigen::MatrixXd t = trivial_motions(c, m, cls);
  Eigen::MatrixXd jac = analytic_jacobian(c, m);
  const int max_rank = 2 * n - static_cast<int>(t.cols());
  Eigen::MatrixXd acting = jac;
  return finish_report(std::move(jac), acting, max_rank, n, rel_tol);
}

Eigen::MatrixXd invariant_subspace(const VortexConfig& c, const SymmetryGroup& group) {
  const auto n = static_cast<Eigen::Index>(c.size());
  std::vector<Eigen::MatrixXd> blocks;
  for (std::size_t e = 0; e < group.generators.size(); ++e) {
    const auto& el = group.generators[e];
    const auto perm = symmetry_permutation(c, el);
    if (!perm) {
      throw Error(ErrorKind::NotASymmetry,
                  "symmetry element " + std::to_string(e) + " does not map the configuration to itself");
    }
    const double ca = el.map.a.real();
    const double sa = el.map.a.imag();
    Eigen::Matrix2d lin;
    if (el.map.conjugate) {
      lin << ca, sa, sa, -ca;
    } else {
      lin << ca, -sa, sa, ca;
    }
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto target = static_cast<Eigen::Index>((*perm)[k]);
      rows.block(2 * k, 2 * target, 2, 2) += Eigen::Matrix2d::Identity();
      rows.block(2 * k, 2 * k, 2, 2) -= lin;
    }
    blocks.push_back(std::move(rows));
  }
  Eigen::MatrixXd constraints(2 * n * static_cast<Eigen::Index>(blocks.size()), 2 * n);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    constraints.middleRows(2 * n * static_cast<Eigen::Index>(b), 2 * n) = blocks[b];
  }
  return null_basis(constraints);
}

RankReport restricted_rank_report(const VortexConfig& c, const Motion& m, const CrystalClass& cls,
                                  const SymmetryGroup& group, double rel_tol, double balance_tol) {
  require_balanced(c, m, balance_tol);
  const int n = static_cast<int>(c.size());
  const Eigen::MatrixXd q = invariant_subspace(c, group);
  const Eigen::MatrixXd t = trivial_motions(c, m, cls);
  const int max_rank = static_cast<int>(q.cols()) - intersection_dim(q, t);
  Eigen::MatrixXd jac = analytic_jacobian(c, m);
  const Eigen::MatrixXd acting = jac * q;
  return finish_report(std::move(jac), acting, max_rank, n, rel_tol);
}

}  // namespace vcl
