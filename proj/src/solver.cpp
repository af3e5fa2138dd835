#include "vcl/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vcl/error.hpp"

namespace vcl {
namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kMotionZero = 1e-12;
constexpr double kArmijoC = 1e-4;
constexpr double kMinStep = 1e-10;

std::vector<cplx> residual_at(const VortexConfig& c, const std::vector<cplx>& p, const Motion& m) {
  const auto s = c.circulations();
  auto f = interaction_sums(c.geometry(), p, s);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] += -std::conj(m.v) + kI * m.omega * std::conj(p[j]);
  return f;
}

Eigen::VectorXd to_real(const std::vector<cplx>& z) {
  Eigen::VectorXd out(2 * static_cast<Eigen::Index>(z.size()));
  for (std::size_t k = 0; k < z.size(); ++k) {
    out(2 * k) = z[k].real();
    out(2 * k + 1) = z[k].imag();
  }
  return out;
}

std::vector<cplx> to_complex(const Eigen::VectorXd& x) {
  std::vector<cplx> out(static_cast<std::size_t>(x.size() / 2));
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {x(2 * k), x(2 * k + 1)};
  return out;
}

// Linear gauge rows G so that G x is held at its initial value.
Eigen::MatrixXd gauge_rows(Gauge gauge, Eigen::Index n) {
  switch (gauge) {
    case Gauge::Rotating: {
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(1, 2 * n);
      g(0, 1) = 1.0;
      return g;
    }
    case Gauge::Translating:
    case Gauge::Periodic: {
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2 * n);
      for (Eigen::Index k = 0; k < n; ++k) {
        g(0, 2 * k) = 1.0;
        g(1, 2 * k + 1) = 1.0;
      }
      return g;
    }
    case Gauge::Stationary: {
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(std::min<Eigen::Index>(4, 2 * n), 2 * n);
      for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, r) = 1.0;
      return g;
    }
    case Gauge::Auto:
    case Gauge::None:
      break;
  }
  return Eigen::MatrixXd(0, 2 * n);
}

// Gauss-Newton on x = x0 + basis * y.
SolveResult gauss_newton(const VortexConfig& c, const Motion& m, const Eigen::MatrixXd& basis,
                         const SolveSettings& s) {
  if (!(s.tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  if (s.max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be at least 1");
  if (!(s.damping > 0.0 && s.damping <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "damping must lie in (0, 1]");
  }
  const auto n = static_cast<Eigen::Index>(c.size());
  const Gauge gauge = resolve_gauge(c, m, s.gauge);
  const Eigen::MatrixXd g = gauge_rows(gauge, n);
  const Eigen::VectorXd x0 = to_real(c.positions());
  const Eigen::VectorXd g0 = g * x0;
  const double rank_rel = 2.0 * static_cast<double>(n) * kRankTolPerDim;

  Eigen::VectorXd x = x0;
  auto stacked = [&](const Eigen::VectorXd& xv, double& sup) {
    const auto f = residual_at(c, to_complex(xv), m);
    sup = sup_norm(f);
    Eigen::VectorXd r(2 * n + g.rows());
    r.head(2 * n) = to_real(f);
    r.tail(g.rows()) = g * xv - g0;
    return r;
  };

  double sup = 0.0;
  Eigen::VectorXd r = stacked(x, sup);
  if (!std::isfinite(sup)) throw Error(ErrorKind::InvalidArgument, "initial residual is not finite");
  int iter = 0;
  for (; iter < s.max_iter && !(sup < s.tol); ++iter) {
    const VortexConfig current = c.with_positions(to_complex(x));
    Eigen::MatrixXd a(2 * n + g.rows(), basis.cols());
    a.topRows(2 * n) = analytic_jacobian(current, m) * basis;
    a.bottomRows(g.rows()) = g * basis;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) {
      std::ostringstream msg;
      msg << "normal equations are singular; singular values:";
      for (Eigen::Index k = 0; k < sv.size(); ++k) msg << ' ' << sv(k);
      throw Error(ErrorKind::SingularNormalEquations, msg.str());
    }
    // Truncated pseudo-inverse: minimum-norm step that ignores directions the
    // residual cannot see.
    const double cut = rank_rel * sv(0);
    Eigen::VectorXd coeff = svd.matrixU().transpose() * r;
    for (Eigen::Index k = 0; k < sv.size(); ++k) coeff(k) = sv(k) > cut ? coeff(k) / sv(k) : 0.0;
    const Eigen::VectorXd dy = -(svd.matrixV() * coeff) * s.damping;
    const Eigen::VectorXd dx = basis * dy;

    const double phi = 0.5 * r.squaredNorm();
    const double slope = (a.transpose() * r).dot(dy);
    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= kMinStep) {
      const Eigen::VectorXd trial = x + alpha * dx;
      double trial_sup = 0.0;
      Eigen::VectorXd trial_r;
      try {
        trial_r = stacked(trial, trial_sup);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::CoincidentVortices) throw;
        alpha *= 0.5;
        continue;
      }
      const double trial_phi = 0.5 * trial_r.squaredNorm();
      if (std::isfinite(trial_phi) && trial_phi <= phi + kArmijoC * alpha * slope && trial_sup <= sup) {
        x = trial;
        r = trial_r;
        sup = trial_sup;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  if (!(sup < s.tol)) {
    std::ostringstream msg;
    msg << "no convergence after " << iter << " iterations; residual sup-norm " << sup;
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  SolveResult out;
  out.config = c.with_positions(to_complex(x));
  out.motion = m;
  out.iterations = iter;
  out.report = balance_report(out.config, m, std::max(s.tol, kDefaultBalanceTol));
  return out;
}

double min_pair_distance(const Geometry& g, const std::vector<cplx>& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      best = std::min(best, std::abs(lattice_reduce(p[i] - p[j], g)));
    }
  }
  return best;
}

std::vector<cplx> velocity(const VortexConfig& c, const std::vector<cplx>& p) {
  const auto s = c.circulations();
  auto u = interaction_sums(c.geometry(), p, s);
  for (auto& z : u) z = std::conj(z);
  return u;
}

}  // namespace

Gauge resolve_gauge(const VortexConfig& c, const Motion& m, Gauge requested) {
  if (requested != Gauge::Auto) return requested;
  if (c.geometry().periodic()) return Gauge::Periodic;
  if (std::abs(m.omega) > kMotionZero) return Gauge::Rotating;
  if (std::abs(m.v) > kMotionZero) return Gauge::Translating;
  return Gauge::Stationary;
}

SolveResult refine(const VortexConfig& c, const Motion& m, const SolveSettings& s) {
  const auto dim = static_cast<Eigen::Index>(2 * c.size());
  return gauss_newton(c, m, Eigen::MatrixXd::Identity(dim, dim), s);
}

VortexConfig symmetrize(const VortexConfig& c, const SymmetryGroup& group, double match_tol) {
  const Geometry& g = c.geometry();
  std::vector<cplx> p = c.positions();
  for (int pass = 0; pass < 5; ++pass) {
    const VortexConfig current = c.with_positions(p);
    std::vector<cplx> acc(p.size(), cplx{0.0, 0.0});
    for (std::size_t e = 0; e < group.generators.size(); ++e) {
      const auto& el = group.generators[e];
      const auto perm = symmetry_permutation(current, el, match_tol);
      if (!perm) {
        throw Error(ErrorKind::NotASymmetry,
                    "symmetry element " + std::to_string(e) + " does not map the configuration to itself");
      }
      for (std::size_t k = 0; k < p.size(); ++k) {
        const cplx w = (p[(*perm)[k]] - el.map.b) / el.map.a;
        const cplx pre = el.map.conjugate ? std::conj(w) : w;
        acc[k] += p[k] + lattice_reduce(pre - p[k], g);
      }
    }
    const double weight = 1.0 / static_cast<double>(group.generators.size() + 1);
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = (p[k] + acc[k]) * weight;
  }
  return c.with_positions(p);
}

SolveResult refine_symmetric(const VortexConfig& c, const Motion& m, const SymmetryGroup& group,
                             const SolveSettings& s, double match_tol) {
  const VortexConfig start = symmetrize(c, group, match_tol);
  return gauss_newton(start, m, invariant_subspace(start, group), s);
}

Trajectory integrate(const VortexConfig& c, double t_end, double dt, int record_every) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (!(t_end >= 0.0)) throw Error(ErrorKind::InvalidArgument, "t_end must be non-negative");
  if (record_every < 1) throw Error(ErrorKind::InvalidArgument, "record_every must be at least 1");
  const Geometry& g = c.geometry();
  std::vector<cplx> p = c.positions();
  if (min_pair_distance(g, p) < kCollisionDistance) {
    throw Error(ErrorKind::CollisionAbort, "vortices closer than 1e-6 at t = 0");
  }
  Trajectory traj;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.push_back(p);
    traj.motion_fit.push_back(infer_motion(c.with_positions(p)));
  };
  record(0.0);
  const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
  const std::size_t n = p.size();
  auto axpy = [n](const std::vector<cplx>& base, const std::vector<cplx>& k, double h) {
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = base[i] + h * k[i];
    return out;
  };
  for (long long step = 1; step <= steps; ++step) {
    const double t0 = static_cast<double>(step - 1) * dt;
    const double h = std::min(dt, t_end - t0);
    const auto k1 = velocity(c, p);
    const auto k2 = velocity(c, axpy(p, k1, h / 2));
    const auto k3 = velocity(c, axpy(p, k2, h / 2));
    const auto k4 = velocity(c, axpy(p, k3, h));
    for (std::size_t i = 0; i < n; ++i) p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const double t = step == steps ? t_end : static_cast<double>(step) * dt;
    if (min_pair_distance(g, p) < kCollisionDistance) {
      std::ostringstream msg;
      msg << "collision at t = " << t;
      throw Error(ErrorKind::CollisionAbort, msg.str());
    }
    if (step % record_every == 0 || step == steps) record(t);
  }
  return traj;
}

double rigidity_drift(const Trajectory& traj) {
  if (traj.states.size() < 2) return 0.0;
  const auto& first = traj.states.front();
  double worst = 0.0;
  for (const auto& state : traj.states) {
    for (std::size_t i = 0; i < state.size(); ++i) {
      for (std::size_t j = i + 1; j < state.size(); ++j) {
        worst = std::max(worst, std::abs(std::abs(state[i] - state[j]) - std::abs(first[i] - first[j])));
      }
    }
  }
  return worst;
}

std::vector<SweepStep> sweep(const FamilyGenerator& family, double from, double to, int steps,
                             const SolveSettings& s) {
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "steps must be non-negative");
  std::vector<SweepStep> out;
  for (int i = 0; i < steps; ++i) {
    const double param = steps == 1 ? from : from + (to - from) * i / (steps - 1);
    SolveResult solved;
    try {
      auto [seed, seed_motion] = family(param);
      (void)seed_motion;
      solved = refine(seed, infer_motion(seed), s);
      if (!solved.report.balanced) throw Error(ErrorKind::NoConvergence, "refined seed not balanced");
    } catch (const Error& first) {
      if (out.empty()) {
        throw Error(first.kind(), "at parameter " + std::to_string(param) + ": " + first.what());
      }
      try {
        auto [seed, seed_motion] = family(param);
        (void)seed_motion;
        const VortexConfig prev(seed.geometry(), out.back().config.vortices());
        solved = refine(prev, infer_motion(prev), s);
      } catch (const Error& e) {
        throw Error(e.kind(), "at parameter " + std::to_string(param) + ": " + e.what());
      }
    }
    SweepStep st;
    st.param = param;
    st.motion = infer_motion(solved.config);
    st.config = solved.config;
    st.rank = rank_report(st.config, st.motion, classify(st.config, st.motion));
    st.rank_changed = !out.empty() && out.back().rank.rank != st.rank.rank;
    out.push_back(std::move(st));
  }
  return out;
}

}  // namespace vcl
