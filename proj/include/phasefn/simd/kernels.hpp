#pragma once

// Data-parallel loops of the spectral pipeline. Each kernel has a scalar
// reference and, on x86-64, an AVX2 variant chosen at first use.
// PHASEFN_ISA=scalar|avx2 in the environment overrides the detection.

#include <complex>
#include <cstddef>

namespace phasefn::simd {

enum class Isa { scalar, avx2 };

using cplx = std::complex<double>;

struct KernelTable {
    Isa isa;
    // sum_k |x_k|, with |z| = sqrt(re^2 + im^2)
    double (*sum_abs)(const cplx* x, std::size_t n);
    // sum_k |a_k - b_k|
    double (*sum_abs_diff)(const cplx* a, const cplx* b, std::size_t n);
    double (*max_abs)(const double* x, std::size_t n);
    // out_k = in_k * m_k
    void (*mul_real)(cplx* out, const cplx* in, const double* m, std::size_t n);
    // out_k = in_k * (i m_k)
    void (*mul_imag)(cplx* out, const cplx* in, const double* m, std::size_t n);
    // x_k *= s (-1)^k
    void (*alternate_scale)(cplx* x, double s, std::size_t n);
    // out_k = a_k * b_k
    void (*mul_pointwise)(double* out, const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
bool isa_available(Isa isa) noexcept;
/// Table for a specific ISA; throws UsageError when the CPU lacks it.
const KernelTable& table_for(Isa isa);
/// The table used by the library.
const KernelTable& active() noexcept;
Isa active_isa() noexcept;
/// Switches the library-wide table (tests and benchmarks).
void set_isa(Isa isa);
const char* isa_name(Isa isa) noexcept;

namespace detail {
#if defined(PHASEFN_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
}  // namespace detail

}  // namespace phasefn::simd
