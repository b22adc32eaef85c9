#include "phasefn/convexp.hpp"

#include <string>

#include "phasefn/errors.hpp"

namespace phasefn {

namespace {

template <class Real>
void guard(const RealSample<Real>& f) {
    const Real m = linf_norm(f);
    if (!(m < Real(kExpGuard)))
        throw MagnitudeError("convolution exponential: ||f||_inf = " + std::to_string(to_double(m)) +
                             " exceeds the overflow guard");
}

}  // namespace

template <class Real>
RealSample<Real> expm1_minus_id(const RealSample<Real>& f) {
    using std::expm1;
    guard(f);
    RealSample<Real> g(f.grid);
    for (std::size_t j = 0; j < g.values.size(); ++j) g.values[j] = expm1(f.values[j]) - f.values[j];
    return g;
}

template <class Real>
SpectralSample<Real> exp1_star(const SpectralSample<Real>& Psi) {
    using std::expm1;
    RealSample<Real> f = inverse(Psi);
    guard(f);
    for (Real& v : f.values) v = expm1(v);
    return forward(f);
}

template <class Real>
SpectralSample<Real> exp2_star(const SpectralSample<Real>& Psi) {
    return forward(expm1_minus_id(inverse(Psi)));
}

template <class Real>
SpectralSample<Real> exp2_star_series(const SpectralSample<Real>& Psi, int n_terms) {
    if (n_terms < 1 || n_terms > 30) throw UsageError("exp2_star_series: n_terms must be in [1, 30]");
    if (Psi.grid.size() > 256) throw UsageError("exp2_star_series: oracle restricted to N <= 256");
    SpectralSample<Real> sum(Psi.grid);
    // term_n = Psi^{*n} / (n! (2pi)^{n-1}) = convolve(term_{n-1}, Psi) / n
    SpectralSample<Real> term = Psi;
    for (int n = 2; n <= n_terms; ++n) {
        term = (Real(1) / Real(n)) * convolve(term, Psi);
        sum = sum + term;
    }
    return sum;
}

#define PHASEFN_INSTANTIATE_CONVEXP(R)                                    \
    template SpectralSample<R> exp1_star(const SpectralSample<R>&);      \
    template SpectralSample<R> exp2_star(const SpectralSample<R>&);      \
    template SpectralSample<R> exp2_star_series(const SpectralSample<R>&, int); \
    template RealSample<R> expm1_minus_id(const RealSample<R>&);

PHASEFN_INSTANTIATE_CONVEXP(double)
PHASEFN_INSTANTIATE_CONVEXP(Quad)

}  // namespace phasefn
