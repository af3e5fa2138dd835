#pragma once

// Dense complex polynomials, coefficients in ascending order.

#include <span>
#include <vector>

#include "vcl/kernels.hpp"

namespace vcl::poly {

using Poly = std::vector<cplx>;

Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly scale(const Poly& a, cplx s);
Poly derivative(const Poly& a);
/// a(z - z0).
Poly shift(const Poly& a, cplx z0);
/// Drops trailing zero coefficients (keeps at least one).
Poly trim(Poly a);
cplx eval(const Poly& a, cplx z);
int degree(const Poly& a);

/// Roots by companion-matrix eigenvalues, each polished with Newton steps.
std::vector<cplx> roots(const Poly& a);

}  // namespace vcl::poly
