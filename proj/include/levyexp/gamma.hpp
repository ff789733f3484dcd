#pragma once

#include <complex>

namespace levyexp {

using cplx = std::complex<double>;

/// Principal branch of log Gamma(z), analytic on the plane cut along the
/// non-positive real axis and matching the real lgamma on (0, inf).
/// Throws PoleError at non-positive integers (within 1e-12).
cplx log_gamma(cplx z);

/// 1/Gamma(z). Entire; returns exactly 0 within 1e-12 of a non-positive integer.
cplx reciprocal_gamma(cplx z);

/// True when z lies within `tol` of 0, -1, -2, ...
bool is_nonpositive_integer(cplx z, double tol = 1e-12);

}  // namespace levyexp
