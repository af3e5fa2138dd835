#include "vcl/kernels.hpp"

#include <cmath>
#include <numbers>

#include "vcl/error.hpp"

namespace vcl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
constexpr double kSeriesTol = 1e-16;
constexpr int kMaxTerms = 200000;

void require_modulus(cplx tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
    throw Error(ErrorKind::InvalidModulus, "lattice modulus tau must satisfy Im tau > 0");
  }
}

[[noreturn]] void singular(cplx z) {
  throw Error(ErrorKind::SingularInput,
              "kernel evaluated at a lattice point (|z| = " + std::to_string(std::abs(z)) + ")");
}

// q-series for zeta(1/2) = (pi^2/6) E2(tau).
cplx eta1_series(cplx tau) {
  cplx lambert{0.0, 0.0};
  for (int n = 1; n <= kMaxTerms; ++n) {
    const cplx q2n = std::exp(2.0 * kPi * kI * tau * static_cast<double>(n));
    const cplx term = static_cast<double>(n) * q2n / (1.0 - q2n);
    lambert += term;
    if (std::abs(term) < kSeriesTol * std::max(1.0, std::abs(lambert))) break;
  }
  return kPi * kPi / 6.0 * (1.0 - 24.0 * lambert);
}

// zeta for |Re z| <= 1/2, |Im z| <= Im tau / 2 (with slack).
cplx zeta_core(cplx z, cplx tau, cplx eta1) {
  cplx sum = 2.0 * eta1 * z + pi_cot_pi(z);
  for (int n = 1; n <= kMaxTerms; ++n) {
    const double nd = static_cast<double>(n);
    const cplx q2n = std::exp(2.0 * kPi * kI * tau * nd);
    const cplx plus = std::exp(2.0 * kPi * kI * nd * (tau + z));
    const cplx minus = std::exp(2.0 * kPi * kI * nd * (tau - z));
    // 4 pi q^{2n}/(1-q^{2n}) sin(2 n pi z)
    const cplx term = 4.0 * kPi / (1.0 - q2n) * (plus - minus) / (2.0 * kI);
    sum += term;
    if (std::abs(term) < kSeriesTol * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

cplx p_core(cplx z, cplx tau, cplx eta1) {
  const cplx cot = pi_cot_pi(z) / kPi;
  cplx sum = -2.0 * eta1 + kPi * kPi * (1.0 + cot * cot);
  for (int n = 1; n <= kMaxTerms; ++n) {
    const double nd = static_cast<double>(n);
    const cplx q2n = std::exp(2.0 * kPi * kI * tau * nd);
    const cplx plus = std::exp(2.0 * kPi * kI * nd * (tau + z));
    const cplx minus = std::exp(2.0 * kPi * kI * nd * (tau - z));
    // 8 pi^2 n q^{2n}/(1-q^{2n}) cos(2 n pi z)
    const cplx term = -8.0 * kPi * kPi * nd / (1.0 - q2n) * (plus + minus) / 2.0;
    sum += term;
    if (std::abs(term) < kSeriesTol * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

// Shift z by a tau + b (integers) into the central strip. Points already on
// the boundary of the strip are left alone so that tau/2 and 1/2 are
// evaluated directly by the series.
struct Reduced {
  cplx z;
  double shift_1;    // multiples of 1 removed
  double shift_tau;  // multiples of tau removed
};

Reduced reduce_doubly(cplx z, cplx tau) {
  const double y = z.imag() / tau.imag();
  const double b = std::abs(y) > 0.5 ? std::round(y) : 0.0;
  cplx w = b != 0.0 ? z - b * tau : z;
  const double a = std::abs(w.real()) > 0.5 ? std::round(w.real()) : 0.0;
  if (a != 0.0) w -= a;
  return {w, a, b};
}

}  // namespace

Geometry Geometry::doubly(cplx tau) {
  require_modulus(tau);
  return {GeometryKind::DoublyPeriodic, tau};
}

bool Geometry::operator==(const Geometry& other) const {
  if (kind != other.kind) return false;
  return kind != GeometryKind::DoublyPeriodic || tau == other.tau;
}

cplx pi_cot_pi(cplx z) {
  const cplx x = kPi * z;
  if (std::abs(x.imag()) < 20.0) return kPi * std::cos(x) / std::sin(x);
  if (x.imag() > 0.0) {
    const cplx w = std::exp(2.0 * kI * x);
    return kPi * kI * (w + 1.0) / (w - 1.0);
  }
  const cplx w = std::exp(-2.0 * kI * x);
  return kPi * kI * (1.0 + w) / (1.0 - w);
}

HalfPeriodZeta half_period_zeta(cplx tau) {
  require_modulus(tau);
  const cplx eta1 = eta1_series(tau);
  const cplx eta2 = zeta_core(tau / 2.0, tau, eta1);
  return {eta1, eta2};
}

XiWirtinger xi_wirtinger(cplx tau) {
  const auto [eta1, eta2] = half_period_zeta(tau);
  const cplx denom = tau - std::conj(tau);
  return {(2.0 * eta2 - 2.0 * eta1 * std::conj(tau)) / denom,
          (2.0 * eta1 * tau - 2.0 * eta2) / denom};
}

std::pair<double, double> lattice_coordinates(cplx z, cplx tau) {
  const double y = z.imag() / tau.imag();
  return {z.real() - y * tau.real(), y};
}

cplx lattice_reduce(cplx z, const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::Finite:
      return z;
    case GeometryKind::SinglyPeriodic: {
      const double a = std::round(z.real());
      return a != 0.0 ? z - a : z;
    }
    case GeometryKind::DoublyPeriodic:
      return reduce_doubly(z, g.tau).z;
  }
  return z;
}

cplx weierstrass_zeta(cplx z, cplx tau) {
  require_modulus(tau);
  const auto [eta1, eta2] = half_period_zeta(tau);
  const Reduced r = reduce_doubly(z, tau);
  if (std::abs(r.z) < kSingularRadius) singular(z);
  return zeta_core(r.z, tau, eta1) + 2.0 * r.shift_1 * eta1 + 2.0 * r.shift_tau * eta2;
}

cplx weierstrass_p(cplx z, cplx tau) {
  require_modulus(tau);
  const cplx eta1 = eta1_series(tau);
  const Reduced r = reduce_doubly(z, tau);
  if (std::abs(r.z) < kSingularRadius) singular(z);
  return p_core(r.z, tau, eta1);
}

cplx xi(cplx z, cplx tau) {
  require_modulus(tau);
  const auto [eta1, eta2] = half_period_zeta(tau);
  const auto [x, y] = lattice_coordinates(z, tau);
  return 2.0 * x * eta1 + 2.0 * y * eta2;
}

cplx upsilon(cplx z, const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::Finite:
      if (std::abs(z) < kSingularRadius) singular(z);
      return 1.0 / z;
    case GeometryKind::SinglyPeriodic: {
      const cplx w = lattice_reduce(z, g);
      if (std::abs(w) < kSingularRadius) singular(z);
      return pi_cot_pi(w);
    }
    case GeometryKind::DoublyPeriodic: {
      const auto [eta1, eta2] = half_period_zeta(g.tau);
      const Reduced r = reduce_doubly(z, g.tau);
      if (std::abs(r.z) < kSingularRadius) singular(z);
      const auto [x, y] = lattice_coordinates(r.z, g.tau);
      return zeta_core(r.z, g.tau, eta1) - (2.0 * x * eta1 + 2.0 * y * eta2);
    }
  }
  return {};
}

WirtingerPair upsilon_wirtinger(cplx z, const Geometry& g) {
  switch (g.kind) {
    case GeometryKind::Finite:
      if (std::abs(z) < kSingularRadius) singular(z);
      return {-1.0 / (z * z), 0.0};
    case GeometryKind::SinglyPeriodic: {
      const cplx w = lattice_reduce(z, g);
      if (std::abs(w) < kSingularRadius) singular(z);
      const cplx cot = pi_cot_pi(w) / kPi;
      return {-kPi * kPi * (1.0 + cot * cot), 0.0};
    }
    case GeometryKind::DoublyPeriodic: {
      const Reduced r = reduce_doubly(z, g.tau);
      if (std::abs(r.z) < kSingularRadius) singular(z);
      const auto [c1, c2] = xi_wirtinger(g.tau);
      return {-weierstrass_p(r.z, g.tau) - c1, -c2};
    }
  }
  return {};
}

}  // namespace vcl
