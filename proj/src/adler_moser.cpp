// Adler-Moser translating crystals. The polynomial work runs in 50-digit
// arithmetic: the roots of Theta_j cluster near the origin and lose most of
// their digits through double-precision monomial coefficients once j > 5.

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vcl/balance.hpp"
#include "vcl/catalog.hpp"
#include "vcl/error.hpp"
#include "vcl/solver.hpp"

namespace vcl {
namespace {

namespace bmp = boost::multiprecision;
using Real = bmp::cpp_bin_float_50;
using Cx = bmp::cpp_complex_50;
using MPoly = std::vector<Cx>;

constexpr double kRootSeparation = 1e-8;

Cx to_mp(cplx z) { return Cx(Real(z.real()), Real(z.imag())); }
cplx to_double(const Cx& z) { return {z.real().convert_to<double>(), z.imag().convert_to<double>()}; }

const Real& pi_mp() {
  static const Real value = boost::math::constants::pi<Real>();
  return value;
}

MPoly derivative(const MPoly& a) {
  if (a.size() <= 1) return {Cx(0)};
  MPoly out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<int>(i);
  return out;
}

MPoly mul(const MPoly& a, const MPoly& b) {
  MPoly out(a.size() + b.size() - 1, Cx(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  }
  return out;
}

// a(z - z0).
MPoly shift(const MPoly& a, const Cx& z0) {
  MPoly out(a.size(), Cx(0));
  MPoly power{Cx(1)};
  for (const Cx& c : a) {
    for (std::size_t i = 0; i < power.size(); ++i) out[i] += c * power[i];
    MPoly next(power.size() + 1, Cx(0));
    for (std::size_t i = 0; i < power.size(); ++i) {
      next[i + 1] += power[i];
      next[i] -= z0 * power[i];
    }
    power = std::move(next);
  }
  return out;
}

Cx eval(const MPoly& a, const Cx& z) {
  Cx acc(0);
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return acc;
}

// out += factor * z^offset * a
void add_shifted(MPoly& out, const MPoly& a, std::size_t offset, const Cx& factor) {
  if (out.size() < a.size() + offset) out.resize(a.size() + offset, Cx(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i + offset] += factor * a[i];
}

// Solves the consistent overdetermined system sum_c x_c cols[c] = rhs through
// the normal equations and partial-pivoting elimination.
std::vector<Cx> solve_consistent(const std::vector<MPoly>& cols, const MPoly& rhs) {
  const std::size_t k = cols.size();
  std::vector<std::vector<Cx>> n(k, std::vector<Cx>(k + 1, Cx(0)));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      Cx acc(0);
      const std::size_t len = std::min(cols[a].size(), cols[b].size());
      for (std::size_t r = 0; r < len; ++r) acc += conj(cols[a][r]) * cols[b][r];
      n[a][b] = acc;
      n[b][a] = conj(acc);
    }
    Cx acc(0);
    const std::size_t len = std::min(cols[a].size(), rhs.size());
    for (std::size_t r = 0; r < len; ++r) acc += conj(cols[a][r]) * rhs[r];
    n[a][k] = acc;
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (abs(n[r][col]) > abs(n[pivot][col])) pivot = r;
    }
    std::swap(n[col], n[pivot]);
    if (abs(n[col][col]) == 0) throw Error(ErrorKind::SingularNormalEquations, "singular polynomial system");
    for (std::size_t r = col + 1; r < k; ++r) {
      const Cx f = n[r][col] / n[col][col];
      if (f == Cx(0)) continue;
      for (std::size_t c = col; c <= k; ++c) n[r][c] -= f * n[col][c];
    }
  }
  std::vector<Cx> x(k, Cx(0));
  for (std::size_t r = k; r-- > 0;) {
    Cx acc = n[r][k];
    for (std::size_t c = r + 1; c < k; ++c) acc -= n[r][c] * x[c];
    x[r] = acc / n[r][r];
  }
  return x;
}

MPoly ladder(int j, const std::vector<Cx>& kappa) {
  std::vector<MPoly> theta{{Cx(1)}, {Cx(0), Cx(1)}};
  for (int k = 1; k < j; ++k) {
    const auto deg = static_cast<std::size_t>((k + 1) * (k + 2) / 2);
    const auto deg_prev = static_cast<std::size_t>((k - 1) * k / 2);
    const MPoly& prev = theta[k - 1];
    const MPoly dprev = derivative(prev);
    // Wronskian column of z^i: i z^{i-1} prev - z^i prev'.
    auto column = [&](std::size_t i) {
      MPoly col;
      if (i > 0) add_shifted(col, prev, i - 1, Cx(static_cast<int>(i)));
      add_shifted(col, dprev, i, Cx(-1));
      return col;
    };
    MPoly target = mul(theta[k], theta[k]);
    for (auto& c : target) c *= 2 * k + 1;
    add_shifted(target, column(deg), 0, Cx(-1));
    add_shifted(target, column(deg_prev), 0, -kappa[k - 1]);
    std::vector<MPoly> cols;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < deg; ++i) {
      if (i == deg_prev) continue;
      cols.push_back(column(i));
      free.push_back(i);
    }
    const auto x = solve_consistent(cols, target);
    MPoly next(deg + 1, Cx(0));
    next[deg] = Cx(1);
    next[deg_prev] = kappa[k - 1];
    for (std::size_t f = 0; f < free.size(); ++f) next[free[f]] = x[f];
    theta.push_back(std::move(next));
  }
  return theta[static_cast<std::size_t>(j)];
}

// Monic Q with D^2(P.Q) - 2c D(P.Q) = 0.
MPoly partner(const MPoly& p, const Cx& c) {
  const std::size_t deg = p.size() - 1;
  const MPoly d1 = derivative(p);
  const MPoly d2 = derivative(d1);
  auto column = [&](std::size_t i) {
    const Cx ii(static_cast<int>(i));
    MPoly col;
    add_shifted(col, d2, i, Cx(1));
    add_shifted(col, d1, i, -2 * c);
    if (i >= 1) {
      add_shifted(col, d1, i - 1, Cx(-2) * ii);
      add_shifted(col, p, i - 1, 2 * c * ii);
    }
    if (i >= 2) add_shifted(col, p, i - 2, ii * Cx(static_cast<int>(i) - 1));
    return col;
  };
  MPoly q(deg + 1, Cx(0));
  q[deg] = Cx(1);
  if (deg == 0) return q;
  MPoly target;
  add_shifted(target, column(deg), 0, Cx(-1));
  std::vector<MPoly> cols;
  for (std::size_t i = 0; i < deg; ++i) cols.push_back(column(i));
  const auto x = solve_consistent(cols, target);
  for (std::size_t i = 0; i < deg; ++i) q[i] = x[i];
  return q;
}

Cx partner_constant(cplx v) { return Cx(Real(0), 2 * pi_mp()) * conj(to_mp(v)); }

// u = (s, t_2, ..., t_j): kappa_k = i t_k, translation z0 = i s.
std::pair<MPoly, MPoly> symmetric_pair(int j, const std::vector<Real>& u) {
  std::vector<Cx> kappa;
  for (int k = 1; k < j; ++k) kappa.emplace_back(Real(0), u[k]);
  MPoly p = shift(ladder(j, kappa), Cx(Real(0), u[0]));
  MPoly q = partner(p, partner_constant(1.0));
  return {std::move(p), std::move(q)};
}

std::vector<Real> symmetry_defect(int j, const std::vector<Real>& u) {
  const auto [p, q] = symmetric_pair(j, u);
  std::vector<Real> d;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Cx diff = p[i] - conj(q[i]);
    d.push_back(diff.real());
    d.push_back(diff.imag());
  }
  return d;
}

Real norm(const std::vector<Real>& v) {
  Real acc = 0;
  for (const auto& x : v) acc += x * x;
  return sqrt(acc);
}

// Gauss-Newton on the symmetry defect, seeded at the pair (s = 1/(4 pi)).
std::vector<Real> symmetric_parameters(int j) {
  std::vector<Real> u(static_cast<std::size_t>(j), Real(0));
  u[0] = 1 / (4 * pi_mp());
  const Real h("1e-18");
  for (int iter = 0; iter < 40; ++iter) {
    const auto d = symmetry_defect(j, u);
    std::vector<MPoly> cols;
    for (int i = 0; i < j; ++i) {
      auto up = u;
      auto um = u;
      up[i] += h;
      um[i] -= h;
      const auto dp = symmetry_defect(j, up);
      const auto dm = symmetry_defect(j, um);
      MPoly col(d.size());
      for (std::size_t r = 0; r < d.size(); ++r) col[r] = Cx((dp[r] - dm[r]) / (2 * h));
      cols.push_back(std::move(col));
    }
    MPoly rhs(d.size());
    for (std::size_t r = 0; r < d.size(); ++r) rhs[r] = Cx(-d[r]);
    const auto step = solve_consistent(cols, rhs);
    Real step_norm = 0;
    for (int i = 0; i < j; ++i) {
      u[i] += step[i].real();
      step_norm += step[i].real() * step[i].real();
    }
    if (sqrt(step_norm) < Real("1e-30")) break;
  }
  const Real defect = norm(symmetry_defect(j, u));
  if (!(defect < Real("1e-25"))) {
    std::ostringstream msg;
    msg << "symmetric Adler-Moser parameters did not converge for j = " << j << " (defect "
        << defect.convert_to<double>() << ")";
    throw Error(ErrorKind::NoConvergence, msg.str());
  }
  return u;
}

// Aberth-Ehrlich iteration seeded by double-precision companion roots.
std::vector<cplx> mp_roots(const MPoly& p) {
  poly::Poly approx;
  for (const auto& c : p) approx.push_back(to_double(c));
  std::vector<Cx> z;
  for (cplx r : poly::roots(approx)) z.push_back(to_mp(r));
  // Keep the starting points distinct.
  for (std::size_t a = 0; a < z.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      if (abs(z[a] - z[b]) < Real("1e-12")) z[a] += Cx(Real("1e-6") * (a + 1), Real("1e-6"));
    }
  }
  const MPoly dp = derivative(p);
  for (int iter = 0; iter < 200; ++iter) {
    Real worst = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      const Cx ratio = eval(p, z[k]) / eval(dp, z[k]);
      Cx repulsion(0);
      for (std::size_t l = 0; l < z.size(); ++l) {
        if (l != k) repulsion += Cx(1) / (z[k] - z[l]);
      }
      const Cx delta = ratio / (Cx(1) - ratio * repulsion);
      z[k] -= delta;
      worst = std::max(worst, Real(abs(delta)));
    }
    if (worst < Real("1e-40")) break;
  }
  std::vector<cplx> out;
  for (const auto& r : z) out.push_back(to_double(r));
  return out;
}

void require_simple(const std::vector<cplx>& zs) {
  for (std::size_t a = 0; a < zs.size(); ++a) {
    for (std::size_t b = a + 1; b < zs.size(); ++b) {
      if (std::abs(zs[a] - zs[b]) < kRootSeparation) {
        std::ostringstream msg;
        msg << "roots " << a << " and " << b << " are closer than " << kRootSeparation;
        throw Error(ErrorKind::MultipleRoots, msg.str());
      }
    }
  }
}

}  // namespace

AdlerMoserPoly adler_moser_poly(int j, std::span<const cplx> kappa) {
  if (j < 0) throw Error(ErrorKind::OutOfRange, "Adler-Moser index must be non-negative");
  const auto expected = static_cast<std::size_t>(std::max(j - 1, 0));
  if (kappa.size() != expected) {
    throw Error(ErrorKind::ParameterCountMismatch, "Adler-Moser polynomial of index " + std::to_string(j) +
                                                       " takes " + std::to_string(expected) +
                                                       " parameters, got " + std::to_string(kappa.size()));
  }
  std::vector<Cx> k;
  for (cplx z : kappa) k.push_back(to_mp(z));
  AdlerMoserPoly out;
  out.j = j;
  for (const auto& c : ladder(j, k)) out.coeffs.push_back(to_double(c));
  out.kappa.assign(kappa.begin(), kappa.end());
  return out;
}

poly::Poly adler_moser_partner(const poly::Poly& p, cplx v) {
  const poly::Poly trimmed = poly::trim(p);
  MPoly mp;
  const cplx lead = trimmed.back();
  for (cplx c : trimmed) mp.push_back(to_mp(c / lead));
  poly::Poly out;
  for (const auto& c : partner(mp, partner_constant(v))) out.push_back(to_double(c));
  return out;
}

SymmetryGroup adler_moser_symmetry() {
  SymmetryGroup g;
  g.generators.push_back({Isometry::reflection(0.0, 0.0), false});
  g.generators.push_back({Isometry::reflection(0.0, std::numbers::pi / 2.0), true});
  g.generators.push_back({Isometry::rotation(0.0, std::numbers::pi), false});
  return g;
}

Crystal adler_moser_config(int j) {
  if (j < 1 || j > 8) throw Error(ErrorKind::OutOfRange, "Adler-Moser index must lie in [1, 8]");
  const auto u = symmetric_parameters(j);
  const auto [p, q] = symmetric_pair(j, u);
  const auto pos = mp_roots(p);
  const auto neg = mp_roots(q);
  std::vector<cplx> all = pos;
  all.insert(all.end(), neg.begin(), neg.end());
  require_simple(all);
  std::vector<Vortex> vs;
  for (cplx z : pos) vs.push_back({z, 1});
  for (cplx z : neg) vs.push_back({z, -1});
  const VortexConfig seed(Geometry::finite(), std::move(vs));
  const Motion m{1.0, 0.0};
  auto solved = refine_symmetric(seed, m, adler_moser_symmetry());
  const double sup = sup_norm(residual(solved.config, m));
  if (!(sup < 1e-10)) {
    throw Error(ErrorKind::NotBalanced, "adler-moser: refined configuration is not balanced");
  }
  return {std::move(solved.config), m};
}

}  // namespace vcl
