// AVX2 variants. Built with -mavx2 -mfma -ffp-contract=off so every
// elementwise result is bit-identical to the scalar reference; only the
// reductions reassociate.

#include <immintrin.h>

#include <cmath>

#include "phasefn/simd/kernels.hpp"

namespace phasefn::simd::detail {

namespace {

inline const double* dp(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* dp(cplx* p) { return reinterpret_cast<double*>(p); }

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// [m0, m0, m1, m1]
inline __m256d dup2(const double* m) {
    const __m128d mm = _mm_loadu_pd(m);
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(mm), 0b01010000);
}

double sum_abs(const cplx* x, std::size_t n) {
    const double* p = dp(x);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d a = _mm256_loadu_pd(p + 2 * k);
        const __m256d b = _mm256_loadu_pd(p + 2 * k + 4);
        // hadd of squares: [|x0|^2, |x2|^2, |x1|^2, |x3|^2]
        const __m256d sq = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
    }
    double s = hsum(acc);
    for (; k < n; ++k) {
        const double re = x[k].real(), im = x[k].imag();
        s += std::sqrt(re * re + im * im);
    }
    return s;
}

double sum_abs_diff(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = dp(a);
    const double* pb = dp(b);
    __m256d acc = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * k), _mm256_loadu_pd(pb + 2 * k));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * k + 4), _mm256_loadu_pd(pb + 2 * k + 4));
        const __m256d sq = _mm256_hadd_pd(_mm256_mul_pd(d0, d0), _mm256_mul_pd(d1, d1));
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(sq));
    }
    double s = hsum(acc);
    for (; k < n; ++k) {
        const double re = a[k].real() - b[k].real(), im = a[k].imag() - b[k].imag();
        s += std::sqrt(re * re + im * im);
    }
    return s;
}

double max_abs(const double* x, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d m = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) m = _mm256_max_pd(m, _mm256_and_pd(mask, _mm256_loadu_pd(x + k)));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    double r = 0;
    for (double v : lanes) r = v > r ? v : r;
    for (; k < n; ++k) {
        const double v = std::fabs(x[k]);
        if (v > r) r = v;
    }
    return r;
}

void mul_real(cplx* out, const cplx* in, const double* m, std::size_t n) {
    const double* pi = dp(in);
    double* po = dp(out);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) _mm256_storeu_pd(po + 2 * k, _mm256_mul_pd(_mm256_loadu_pd(pi + 2 * k), dup2(m + k)));
    for (; k < n; ++k) out[k] = cplx(in[k].real() * m[k], in[k].imag() * m[k]);
}

void mul_imag(cplx* out, const cplx* in, const double* m, std::size_t n) {
    const double* pi = dp(in);
    double* po = dp(out);
    const __m256d neg_even = _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const __m256d sw = _mm256_permute_pd(_mm256_loadu_pd(pi + 2 * k), 0b0101);  // [im0, re0, im1, re1]
        _mm256_storeu_pd(po + 2 * k, _mm256_xor_pd(_mm256_mul_pd(sw, dup2(m + k)), neg_even));
    }
    for (; k < n; ++k) out[k] = cplx(-(in[k].imag() * m[k]), in[k].real() * m[k]);
}

void alternate_scale(cplx* x, double s, std::size_t n) {
    double* p = dp(x);
    const __m256d f = _mm256_setr_pd(s, s, -s, -s);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) _mm256_storeu_pd(p + 2 * k, _mm256_mul_pd(_mm256_loadu_pd(p + 2 * k), f));
    for (; k < n; ++k) {
        const double g = (k & 1) ? -s : s;
        x[k] = cplx(x[k].real() * g, x[k].imag() * g);
    }
}

void mul_pointwise(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k)));
    for (; k < n; ++k) out[k] = a[k] * b[k];
}

}  // namespace

const KernelTable& avx2_table() noexcept {
    static const KernelTable t{Isa::avx2, sum_abs, sum_abs_diff, max_abs, mul_real, mul_imag, alternate_scale, mul_pointwise};
    return t;
}

}  // namespace phasefn::simd::detail
