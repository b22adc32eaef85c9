#include "phasefn/detail/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "phasefn/errors.hpp"
#include "phasefn/real.hpp"

namespace phasefn::fft {

namespace {

enum Kind { kForward = 0, kBackward = 1, kDct1 = 2 };

template <class Real>
struct Backend;

template <>
struct Backend<double> {
    using plan_t = fftw_plan;
    using real_t = double;
    using cplx_t = fftw_complex;
    static plan_t make(Kind kind, int n) {
        if (kind == kDct1) {
            auto* buf = static_cast<double*>(fftw_malloc(sizeof(double) * n));
            plan_t p = fftw_plan_r2r_1d(n, buf, buf, FFTW_REDFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
            fftw_free(buf);
            return p;
        }
        auto* buf = static_cast<cplx_t*>(fftw_malloc(sizeof(cplx_t) * n));
        plan_t p = fftw_plan_dft_1d(n, buf, buf, kind == kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(buf);
        return p;
    }
    static void destroy(plan_t p) { fftw_destroy_plan(p); }
    static void exec_dft(plan_t p, std::complex<double>* d) {
        auto* c = reinterpret_cast<cplx_t*>(d);
        fftw_execute_dft(p, c, c);
    }
    static void exec_r2r(plan_t p, double* d) { fftw_execute_r2r(p, d, d); }
};

template <>
struct Backend<Quad> {
    using plan_t = fftwq_plan;
    using real_t = __float128;
    using cplx_t = fftwq_complex;
    static plan_t make(Kind kind, int n) {
        if (kind == kDct1) {
            auto* buf = static_cast<real_t*>(fftwq_malloc(sizeof(real_t) * n));
            plan_t p = fftwq_plan_r2r_1d(n, buf, buf, FFTW_REDFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
            fftwq_free(buf);
            return p;
        }
        auto* buf = static_cast<cplx_t*>(fftwq_malloc(sizeof(cplx_t) * n));
        plan_t p = fftwq_plan_dft_1d(n, buf, buf, kind == kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftwq_free(buf);
        return p;
    }
    static void destroy(plan_t p) { fftwq_destroy_plan(p); }
    static void exec_dft(plan_t p, std::complex<Quad>* d) {
        static_assert(sizeof(std::complex<Quad>) == sizeof(cplx_t));
        auto* c = reinterpret_cast<cplx_t*>(d);
        fftwq_execute_dft(p, c, c);
    }
    static void exec_r2r(plan_t p, Quad* d) {
        static_assert(sizeof(Quad) == sizeof(real_t));
        auto* r = reinterpret_cast<real_t*>(d);
        fftwq_execute_r2r(p, r, r);
    }
};

// FFTW's planner is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

template <class Real>
typename Backend<Real>::plan_t plan_for(Kind kind, std::size_t n) {
    using B = Backend<Real>;
    struct Holder {
        typename B::plan_t p;
        ~Holder() { B::destroy(p); }
    };
    static std::map<std::pair<int, std::size_t>, std::unique_ptr<Holder>> cache;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto& slot = cache[{kind, n}];
    if (!slot) {
        auto p = B::make(kind, static_cast<int>(n));
        if (!p) throw NumericalError("FFTW planning failed");
        slot = std::make_unique<Holder>();
        slot->p = p;
    }
    return slot->p;
}

}  // namespace

template <class Real>
void forward(std::complex<Real>* data, std::size_t n) {
    Backend<Real>::exec_dft(plan_for<Real>(kForward, n), data);
}

template <class Real>
void backward(std::complex<Real>* data, std::size_t n) {
    Backend<Real>::exec_dft(plan_for<Real>(kBackward, n), data);
}

template <class Real>
void dct1(Real* data, std::size_t n) {
    if (n < 2) throw UsageError("dct1 needs at least two points");
    Backend<Real>::exec_r2r(plan_for<Real>(kDct1, n), data);
}

template void forward<double>(std::complex<double>*, std::size_t);
template void forward<Quad>(std::complex<Quad>*, std::size_t);
template void backward<double>(std::complex<double>*, std::size_t);
template void backward<Quad>(std::complex<Quad>*, std::size_t);
template void dct1<double>(double*, std::size_t);
template void dct1<Quad>(Quad*, std::size_t);

}  // namespace phasefn::fft
