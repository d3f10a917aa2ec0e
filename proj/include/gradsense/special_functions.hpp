#pragma once

#include <complex>

namespace gradsense::special {

using cplx = std::complex<double>;

/// log Gamma(z) by upward recurrence to Re z >= 10 followed by the Stirling
/// series. The branch is continuous along horizontal lines, not necessarily
/// principal; exp() of the result is always Gamma(z). Throws DomainError at
/// the poles z = 0, -1, -2, ...
cplx complex_log_gamma(cplx z);

cplx complex_gamma(cplx z);

/// Digamma Psi(z) = Gamma'(z)/Gamma(z), same strategy as complex_log_gamma.
cplx complex_digamma(cplx z);

struct BesselValue {
  cplx value;
  /// Rounding error bound from cancellation in the power series.
  double error_bound;
};

/// Bessel function of the first kind J_nu(y) for complex order and real
/// y >= 0, summed as a power series in extended precision.
BesselValue bessel_j(cplx nu, double y);

}  // namespace gradsense::special
