#pragma once

// Truncated convolution exponentials
//   exp1*[Psi] = sum_{n>=1} Psi^{*n} / (n! (2pi)^{n-1}) = F[exp(f) - 1]
//   exp2*[Psi] = sum_{n>=2} Psi^{*n} / (n! (2pi)^{n-1}) = F[exp(f) - 1 - f]
// with f = inverse(Psi).

#include "phasefn/grid.hpp"

namespace phasefn {

/// exp overflow guard on ||inverse(Psi)||_inf.
inline constexpr double kExpGuard = 700.0;

template <class Real>
SpectralSample<Real> exp1_star(const SpectralSample<Real>& Psi);

template <class Real>
SpectralSample<Real> exp2_star(const SpectralSample<Real>& Psi);

/// Partial sum of exp2* over n = 2..n_terms by repeated convolve (oracle; N <= 256, n_terms <= 30).
template <class Real>
SpectralSample<Real> exp2_star_series(const SpectralSample<Real>& Psi, int n_terms);

/// exp(f) - 1 - f pointwise with the overflow guard; shared with the S operator.
template <class Real>
RealSample<Real> expm1_minus_id(const RealSample<Real>& f);

}  // namespace phasefn
