#pragma once

// Thin FFTW front end: cached in-place plans per (size, kind), executed with
// the new-array interface so callers own their buffers.

#include <complex>
#include <cstddef>

namespace phasefn::fft {

/// In-place unnormalized DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
template <class Real>
void forward(std::complex<Real>* data, std::size_t n);

/// In-place unnormalized inverse DFT, x_j = sum_k X_k exp(+2 pi i j k / n).
template <class Real>
void backward(std::complex<Real>* data, std::size_t n);

/// In-place DCT-I (FFTW REDFT00): Y_k = x_0 + (-1)^k x_{n-1} + 2 sum_{j=1}^{n-2} x_j cos(pi j k / (n-1)).
template <class Real>
void dct1(Real* data, std::size_t n);

}  // namespace phasefn::fft
