#include "vcl/catalog.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vcl/balance.hpp"
#include "vcl/error.hpp"
#include "vcl/solver.hpp"

namespace vcl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kGeneratorTol = 1e-10;

Crystal checked(VortexConfig c, Motion m, const char* family) {
  const double sup = sup_norm(residual(c, m));
  if (!(sup < kGeneratorTol)) {
    std::ostringstream msg;
    msg << family << ": generated configuration is not balanced (sup-norm " << sup << ")";
    throw Error(ErrorKind::NotBalanced, msg.str());
  }
  return {std::move(c), m};
}

Crystal refined(const VortexConfig& seed, const char* family) {
  const Motion m = infer_motion(seed);
  auto solved = refine(seed, m);
  return checked(std::move(solved.config), solved.motion, family);
}

// H_n and H_{n-1} at x.
std::pair<double, double> hermite_pair(int n, double x) {
  double prev = 1.0;
  double cur = 2.0 * x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

std::vector<Vortex> polygon(int n, double radius, double phase, int sigma) {
  std::vector<Vortex> out;
  for (int k = 0; k < n; ++k) out.push_back({std::polar(radius, 2.0 * kPi * k / n + phase), sigma});
  return out;
}

}  // namespace

std::vector<double> hermite_roots(int n) {
  if (n < 1 || n > 50) {
    throw Error(ErrorKind::OutOfRange, "hermite degree must lie in [1, 50], got " + std::to_string(n));
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  std::vector<double> roots(eig.eigenvalues().data(), eig.eigenvalues().data() + n);
  for (double& x : roots) {
    const auto [h, hm1] = hermite_pair(n, x);
    const double slope = 2.0 * n * hm1;
    if (slope != 0.0) x -= h / slope;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

Crystal hermite_config(int n) {
  std::vector<Vortex> vs;
  for (double x : hermite_roots(n)) vs.push_back({{x, 0.0}, -1});
  return checked(VortexConfig(Geometry::finite(), std::move(vs)), {0.0, -1.0 / (2.0 * kPi)}, "hermite");
}

Crystal interlaced_hermite(int m) {
  if (m < 0 || m > 49) {
    throw Error(ErrorKind::OutOfRange, "interlaced hermite index must lie in [0, 49], got " + std::to_string(m));
  }
  std::vector<Vortex> vs;
  for (double x : hermite_roots(m + 1)) vs.push_back({{x, 0.0}, 1});
  if (m > 0) {
    for (double x : hermite_roots(m)) vs.push_back({{x, 0.0}, -1});
  }
  return refined(VortexConfig(Geometry::finite(), std::move(vs)), "interlaced-hermite");
}

Crystal thomson(int n, int sigma) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "thomson polygon needs n >= 1");
  if (sigma != 1 && sigma != -1) throw Error(ErrorKind::InvalidArgument, "sigma must be +1 or -1");
  const double omega = sigma * (n - 1) / (4.0 * kPi);
  return checked(VortexConfig(Geometry::finite(), polygon(n, 1.0, 0.0, sigma)), {0.0, omega}, "thomson");
}

Crystal polygon_with_center(int n, int sigma_c) {
  if (n < 2) {
    throw Error(ErrorKind::InvalidArgument, "polygon with centre needs n >= 2, got " + std::to_string(n));
  }
  if (sigma_c != 1 && sigma_c != -1) throw Error(ErrorKind::InvalidArgument, "sigma_c must be +1 or -1");
  auto vs = polygon(n, 1.0, 0.0, -1);
  vs.push_back({0.0, sigma_c});
  return refined(VortexConfig(Geometry::finite(), std::move(vs)), "polygon-center");
}

double nested_polygon_ratio(int k, bool outer) {
  if (k < 1) throw Error(ErrorKind::OutOfRange, "nested polygons need k >= 1");
  const double n = k + 1.0;
  auto g = [n](double r) {
    const double rn = std::pow(r, n);
    return n * (1.0 - rn) / (1.0 + rn) - (1.0 + r * r) / (1.0 - r * r);
  };
  const double lo = outer ? 1.0 + 1e-9 : 1e-12;
  const double hi = outer ? 20.0 : 1.0 - 1e-9;
  const double glo = g(lo);
  const double ghi = g(hi);
  if (!(glo * ghi < 0.0)) {
    std::ostringstream msg;
    msg << "no sign change of the ratio equation on [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::NoRealRoot, msg.str());
  }
  boost::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      g, lo, hi, glo, ghi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (a + b);
}

Crystal nested_polygons(int k, bool outer) {
  const double r = nested_polygon_ratio(k, outer);
  const int n = k + 1;
  auto vs = polygon(n, 1.0, 0.0, 1);
  for (auto& v : polygon(n, r, kPi / n, -1)) vs.push_back(v);
  return refined(VortexConfig(Geometry::finite(), std::move(vs)), "nested-polygons");
}

Crystal vortex_pair() {
  const double h = 1.0 / (4.0 * kPi);
  VortexConfig c(Geometry::finite(), {{{0.0, h}, 1}, {{0.0, -h}, -1}});
  return checked(std::move(c), {1.0, 0.0}, "pair");
}

Crystal karman_street(double b, bool staggered) {
  if (!(b > 0.0)) throw Error(ErrorKind::InvalidArgument, "street offset b must be positive");
  const double x = staggered ? 0.5 : 0.0;
  const double v = staggered ? -std::tanh(kPi * b) / 2.0 : -1.0 / (2.0 * std::tanh(kPi * b));
  VortexConfig c(Geometry::singly(), {{0.0, 1}, {{x, b}, -1}});
  return checked(std::move(c), {v, 0.0}, "karman");
}

Crystal doubly_dipole(cplx tau, cplx offset) {
  const Geometry g = Geometry::doubly(tau);
  if (std::abs(lattice_reduce(offset, g)) < kMinSeparation) {
    throw Error(ErrorKind::InvalidArgument, "dipole offset lies on the lattice");
  }
  VortexConfig c(g, {{0.0, 1}, {offset, -1}});
  const cplx vbar = upsilon(offset, g) / (2.0 * kPi * kI);
  return checked(std::move(c), {std::conj(vbar), 0.0}, "dipole");
}

}  // namespace vcl
