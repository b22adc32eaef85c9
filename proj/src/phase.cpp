#include "phasefn/phase.hpp"

#include <cmath>

#include "phasefn/convexp.hpp"
#include "phasefn/errors.hpp"

namespace phasefn {

template <class Real>
RealSample<Real> apply_S(const RealSample<Real>& f, const Real& lambda) {
    const RealSample<Real> df = inverse(differentiate(forward(f)));
    const RealSample<Real> e = expm1_minus_id(f);
    RealSample<Real> out(f.grid);
    const Real four_l2 = 4 * lambda * lambda;
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] = df.values[j] * df.values[j] / 4 - four_l2 * e.values[j];
    return out;
}

template <class Real>
BandLimited<Real>::BandLimited(const SpectralSample<Real>& f_hat) {
    const auto& g = f_hat.grid;
    const std::size_t N = g.size(), h = N / 2;
    std::size_t last = h;
    for (std::size_t k = h; k < N; ++k)
        if (f_hat.values[k] != Complex<Real>(0) || f_hat.values[g.mirror(k)] != Complex<Real>(0)) last = k;
    const Real scale = g.dxi() / (2 * pi<Real>());
    // f(x) = scale (F_0 + 2 Re sum_{m>0} F_m e^{i m dxi x}) for Hermitian F; averaging F_m with
    // conj(F_-m) keeps the result real for slightly non-Hermitian input
    for (std::size_t k = h; k <= last; ++k) {
        xi_.push_back(g.xi(k));
        const Complex<Real> avg = (f_hat.values[k] + std::conj(f_hat.values[g.mirror(k)])) / Real(2);
        c_.push_back(k == h ? Complex<Real>(scale * avg.real()) : Real(2) * scale * avg);
    }
}

template <class Real>
Real BandLimited<Real>::operator()(const Real& x) const {
    using std::cos;
    using std::sin;
    constexpr std::size_t kResync = 16;
    Real s = 0;
    Complex<Real> e, step;
    if (xi_.size() > 1) {
        const Real th = (xi_[1] - xi_[0]) * x;
        step = Complex<Real>(cos(th), sin(th));
    }
    for (std::size_t m = 0; m < xi_.size(); ++m) {
        if (m % kResync == 0) {
            const Real th = xi_[m] * x;
            e = Complex<Real>(cos(th), sin(th));
        } else {
            e *= step;
        }
        s += c_[m].real() * e.real() - c_[m].imag() * e.imag();
    }
    return s;
}

template <class Real>
PhaseFunction<Real> PhaseFunction<Real>::from_r(const Real& lambda, ChebyshevSeries<Real> r, const Real& alpha_a,
                                                const Real& tail) {
    using std::exp;
    if (!(lambda > 0)) throw UsageError("PhaseFunction: lambda must be positive");
    const Real tl = tail > 0 ? tail : PrecisionDefaults<Real>::cheb_tail();
    PhaseFunction p;
    p.lambda_ = lambda;
    p.dr_ = r.derivative();
    p.d2r_ = p.dr_.derivative();
    const ChebyshevSeries<Real>& rr = r;
    const auto half = adaptive_chebyshev<Real>([&rr](Real t) { return Real(exp(rr(t) / 2)); }, r.a(), r.b(), tl);
    std::vector<Real> c = half.antiderivative(alpha_a / lambda).coeffs();
    for (Real& v : c) v *= lambda;
    p.alpha_ = ChebyshevSeries<Real>(r.a(), r.b(), std::move(c));
    p.alpha_a_ = alpha_a;
    p.alpha_series_at_a_ = p.alpha_(r.a());
    p.r_ = std::move(r);
    return p;
}

template <class Real>
void PhaseFunction<Real>::check(const Real& t) const {
    using std::abs;
    const Real slack = 4 * eps<Real>() * (abs(a()) + abs(b()));
    if (!(t >= a() - slack && t <= b() + slack))
        throw DomainError("phase function evaluated at t = " + std::to_string(to_double(t)) + " outside [" +
                          std::to_string(to_double(a())) + ", " + std::to_string(to_double(b())) + "]");
}

template <class Real>
Real PhaseFunction<Real>::alpha(const Real& t) const {
    check(t);
    return alpha_a_ + (alpha_(t) - alpha_series_at_a_);
}

template <class Real>
Real PhaseFunction<Real>::dalpha(const Real& t) const {
    using std::exp;
    check(t);
    return lambda_ * exp(r_(t) / 2);
}

template <class Real>
PhaseFunction<Real> build_phase(const SolveResult<Real>& result, const CoefficientProblem<Real>& prob,
                                const PhaseOptions<Real>& opts) {
    using std::log;
    const Real tail = opts.tail > 0 ? opts.tail : PrecisionDefaults<Real>::cheb_tail();
    const BandLimited<Real> delta(result.delta_hat);
    const auto& q = prob.coefficient.q;
    const auto& map = prob.map;
    auto r = adaptive_chebyshev<Real>(
        [&](Real t) {
            const Real qt = q(t);
            if (!(qt > 0)) throw DomainError("q must be positive on [a, b]");
            return Real(log(qt) + delta(map.x_of_t(t)));
        },
        prob.coefficient.interval_a, prob.coefficient.interval_b, tail);
    return PhaseFunction<Real>::from_r(prob.lambda, std::move(r), Real(0), tail);
}

template <class Real>
std::pair<Real, Real> eval_basis(const PhaseFunction<Real>& phase, const Real& t) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const Real a = phase.alpha(t);
    const Real s = sqrt(phase.dalpha(t));
    return {cos(a) / s, sin(a) / s};
}

template <class Real>
BasisJet<Real> eval_basis_jet(const PhaseFunction<Real>& phase, const Real& t) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const Real a = phase.alpha(t);
    const Real s = sqrt(phase.dalpha(t));
    const Real k = phase.dr(t) / (4 * s);
    const Real c = cos(a), sn = sin(a);
    return {c / s, -sn * s - c * k, sn / s, c * s - sn * k};
}

template <class Real>
std::vector<Real> interior_nodes(const Real& a, const Real& b, std::size_t n, double exclude) {
    const Real lo = a + Real(exclude) * (b - a), hi = b - Real(exclude) * (b - a);
    std::vector<Real> out;
    for (const Real& t : chebyshev_points(n, a, b))
        if (t >= lo && t <= hi) out.push_back(t);
    return out;
}

template <class Real>
std::vector<Real> kummer_residual(const PhaseFunction<Real>& phase, const RealFn<Real>& q,
                                  const std::vector<Real>& t_nodes) {
    using std::exp;
    const Real l2 = phase.lambda() * phase.lambda();
    std::vector<Real> out;
    out.reserve(t_nodes.size());
    for (const Real& t : t_nodes) {
        phase.alpha(t);  // domain check
        const Real r = phase.r(t), dr = phase.dr(t), d2r = phase.d2r(t);
        out.push_back(l2 * (exp(r) - q(t)) + d2r / 4 - dr * dr / 16);
    }
    return out;
}

template <class Real>
std::vector<Real> kummer_residual(const PhaseFunction<Real>& phase, const CoefficientProblem<Real>& prob,
                                  const std::vector<Real>& t_nodes) {
    return kummer_residual(phase, prob.coefficient.q, t_nodes);
}

template <class Real>
Real integral_equation_residual(const SolveResult<Real>& result, const CoefficientProblem<Real>& prob) {
    using std::abs;
    const auto bump = make_bump(prob.grid, prob.lambda);
    const RealSample<Real> sigma_b = inverse(result.psi);
    const RealSample<Real> tb = inverse(apply_Wb(result.psi, *bump));
    const RealSample<Real> s = apply_S(tb, prob.lambda);
    Real rn = 0;
    for (std::size_t j = 0; j < s.values.size(); ++j)
        rn = std::max(rn, Real(abs(sigma_b.values[j] - s.values[j] - prob.p_x.values[j])));
    const Real pn = linf_norm(prob.p_x);
    if (pn == 0) return rn;
    return rn / pn;
}

template <class Real>
ChebyshevSeries<Real> delta_series(const SolveResult<Real>& result, const CoefficientProblem<Real>& prob,
                                   const Real& tail) {
    const BandLimited<Real> delta(result.delta_hat);
    const auto& map = prob.map;
    return adaptive_chebyshev<Real>([&](Real t) { return delta(map.x_of_t(t)); }, prob.coefficient.interval_a,
                                    prob.coefficient.interval_b, tail);
}

#define PHASEFN_INSTANTIATE_PHASE(R)                                                                         \
    template RealSample<R> apply_S(const RealSample<R>&, const R&);                                          \
    template class BandLimited<R>;                                                                           \
    template class PhaseFunction<R>;                                                                         \
    template PhaseFunction<R> build_phase(const SolveResult<R>&, const CoefficientProblem<R>&,               \
                                          const PhaseOptions<R>&);                                           \
    template std::pair<R, R> eval_basis(const PhaseFunction<R>&, const R&);                                  \
    template BasisJet<R> eval_basis_jet(const PhaseFunction<R>&, const R&);                                  \
    template std::vector<R> interior_nodes(const R&, const R&, std::size_t, double);                         \
    template std::vector<R> kummer_residual(const PhaseFunction<R>&, const RealFn<R>&, const std::vector<R>&); \
    template std::vector<R> kummer_residual(const PhaseFunction<R>&, const CoefficientProblem<R>&,           \
                                            const std::vector<R>&);                                          \
    template R integral_equation_residual(const SolveResult<R>&, const CoefficientProblem<R>&);              \
    template ChebyshevSeries<R> delta_series(const SolveResult<R>&, const CoefficientProblem<R>&, const R&);

PHASEFN_INSTANTIATE_PHASE(double)
PHASEFN_INSTANTIATE_PHASE(Quad)

}  // namespace phasefn
