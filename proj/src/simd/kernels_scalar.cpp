#include "phasefn/detail/kernels_generic.hpp"

namespace phasefn::simd {

namespace {

double sum_abs(const cplx* x, std::size_t n) { return kern::sum_abs_ref<double>(x, n); }
double sum_abs_diff(const cplx* a, const cplx* b, std::size_t n) { return kern::sum_abs_diff_ref<double>(a, b, n); }
double max_abs(const double* x, std::size_t n) { return kern::max_abs_ref<double>(x, n); }
void mul_real(cplx* out, const cplx* in, const double* m, std::size_t n) { kern::mul_real_ref<double>(out, in, m, n); }
void mul_imag(cplx* out, const cplx* in, const double* m, std::size_t n) { kern::mul_imag_ref<double>(out, in, m, n); }
void alternate_scale(cplx* x, double s, std::size_t n) { kern::alternate_scale_ref<double>(x, s, n); }
void mul_pointwise(double* out, const double* a, const double* b, std::size_t n) {
    kern::mul_pointwise_ref<double>(out, a, b, n);
}

}  // namespace

const KernelTable& scalar_table() noexcept {
    static const KernelTable t{Isa::scalar, sum_abs, sum_abs_diff, max_abs, mul_real, mul_imag, alternate_scale, mul_pointwise};
    return t;
}

}  // namespace phasefn::simd
