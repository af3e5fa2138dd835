#include "vcl/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "vcl/error.hpp"

namespace vcl::poly {

Poly add(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

Poly sub(const Poly& a, const Poly& b) { return add(a, scale(b, -1.0)); }

Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  }
  return out;
}

Poly scale(const Poly& a, cplx s) {
  Poly out = a;
  for (auto& c : out) c *= s;
  return out;
}

Poly derivative(const Poly& a) {
  if (a.size() <= 1) return {cplx{0.0, 0.0}};
  Poly out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = static_cast<double>(i) * a[i];
  return out;
}

Poly shift(const Poly& a, cplx z0) {
  Poly out{cplx{0.0, 0.0}};
  Poly power{cplx{1.0, 0.0}};
  const Poly linear{-z0, cplx{1.0, 0.0}};
  for (const cplx c : a) {
    out = add(out, scale(power, c));
    power = mul(power, linear);
  }
  return out;
}

Poly trim(Poly a) {
  while (a.size() > 1 && a.back() == cplx{0.0, 0.0}) a.pop_back();
  return a;
}

cplx eval(const Poly& a, cplx z) {
  cplx acc{0.0, 0.0};
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return acc;
}

int degree(const Poly& a) { return static_cast<int>(trim(a).size()) - 1; }

std::vector<cplx> roots(const Poly& a) {
  const Poly p = trim(a);
  const int d = static_cast<int>(p.size()) - 1;
  if (d < 0 || p.back() == cplx{0.0, 0.0}) throw Error(ErrorKind::InvalidArgument, "zero polynomial");
  if (d == 0) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -p[i] / p.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  const Poly dp = derivative(p);
  std::vector<cplx> out;
  out.reserve(d);
  for (int i = 0; i < d; ++i) {
    cplx z = solver.eigenvalues()(i);
    for (int it = 0; it < 3; ++it) {
      const cplx slope = eval(dp, z);
      if (slope == cplx{0.0, 0.0}) break;
      const cplx step = eval(p, z) / slope;
      if (!(std::abs(step) < 1e-6 * std::max(1.0, std::abs(z)))) break;
      z -= step;
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace vcl::poly
