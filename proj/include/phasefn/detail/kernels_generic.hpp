#pragma once

// Scalar reference loops, generic over the real type. The double
// instantiation is the scalar entry of the SIMD dispatch table.

#include <complex>
#include <cstddef>
#include <type_traits>

#include "phasefn/simd/kernels.hpp"

namespace phasefn::kern {

template <class Real>
Real sum_abs_ref(const std::complex<Real>* x, std::size_t n) {
    using std::sqrt;
    Real s = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Real re = x[k].real(), im = x[k].imag();
        s += sqrt(re * re + im * im);
    }
    return s;
}

template <class Real>
Real sum_abs_diff_ref(const std::complex<Real>* a, const std::complex<Real>* b, std::size_t n) {
    using std::sqrt;
    Real s = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Real re = a[k].real() - b[k].real(), im = a[k].imag() - b[k].imag();
        s += sqrt(re * re + im * im);
    }
    return s;
}

template <class Real>
Real max_abs_ref(const Real* x, std::size_t n) {
    using std::abs;
    Real m = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const Real v = abs(x[k]);
        if (v > m) m = v;
    }
    return m;
}

template <class Real>
void mul_real_ref(std::complex<Real>* out, const std::complex<Real>* in, const Real* m, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = std::complex<Real>(in[k].real() * m[k], in[k].imag() * m[k]);
}

template <class Real>
void mul_imag_ref(std::complex<Real>* out, const std::complex<Real>* in, const Real* m, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = std::complex<Real>(-(in[k].imag() * m[k]), in[k].real() * m[k]);
}

template <class Real>
void alternate_scale_ref(std::complex<Real>* x, Real s, std::size_t n) {
    const Real ms = -s;
    for (std::size_t k = 0; k < n; ++k) {
        const Real f = (k & 1) ? ms : s;
        x[k] = std::complex<Real>(x[k].real() * f, x[k].imag() * f);
    }
}

template <class Real>
void mul_pointwise_ref(Real* out, const Real* a, const Real* b, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * b[k];
}

// Front doors: double goes through the active SIMD table.

template <class Real>
Real sum_abs(const std::complex<Real>* x, std::size_t n) {
    if constexpr (std::is_same_v<Real, double>) return simd::active().sum_abs(x, n);
    else return sum_abs_ref(x, n);
}

template <class Real>
Real sum_abs_diff(const std::complex<Real>* a, const std::complex<Real>* b, std::size_t n) {
    if constexpr (std::is_same_v<Real, double>) return simd::active().sum_abs_diff(a, b, n);
    else return sum_abs_diff_ref(a, b, n);
}

template <class Real>
Real max_abs(const Real* x, std::size_t n) {
    if constexpr (std::is_same_v<Real, double>) return simd::active().max_abs(x, n);
    else return max_abs_ref(x, n);
}

template <class Real>
void mul_real(std::complex<Real>* out, const std::complex<Real>* in, const Real* m, std::size_t n) {
    if constexpr (std::is_same_v<Real, double>) simd::active().mul_real(out, in, m, n);
    else mul_real_ref(out, in, m, n);
}

template <class Real>
void mul_imag(std::complex<Real>* out, const std::complex<Real>* in, const Real* m, std::size_t n) {
    if constexpr (std::is_same_v<Real, double>) simd::active().mul_imag(out, in, m, n);
    else mul_imag_ref(out, in, m, n);
}

template <class Real>
void alternate_scale(std::complex<Real>* x, Real s, std::size_t n) {
    if constexpr (std::is_same_v<Real, double>) simd::active().alternate_scale(x, s, n);
    else alternate_scale_ref(x, s, n);
}

template <class Real>
void mul_pointwise(Real* out, const Real* a, const Real* b, std::size_t n) {
    if constexpr (std::is_same_v<Real, double>) simd::active().mul_pointwise(out, a, b, n);
    else mul_pointwise_ref(out, a, b, n);
}

}  // namespace phasefn::kern
