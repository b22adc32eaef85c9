#pragma once

// Phase function alpha(t) = alpha(a) + lambda int_a^t exp(r(u)/2) du with
// r(t) = log q(t) + delta(x(t)), and the basis u = cos(alpha)/sqrt(alpha'),
// v = sin(alpha)/sqrt(alpha').

#include <functional>
#include <utility>
#include <vector>

#include "phasefn/chebyshev.hpp"
#include "phasefn/grid.hpp"
#include "phasefn/problem.hpp"
#include "phasefn/solver.hpp"

namespace phasefn {

/// S[f] = (f')^2/4 - 4 lambda^2 (exp(f) - 1 - f), f' spectral.
template <class Real>
RealSample<Real> apply_S(const RealSample<Real>& f, const Real& lambda);

/// Band-limited interpolant (1/2pi) sum_k f^_k exp(i xi_k x) dxi at arbitrary x.
template <class Real>
class BandLimited {
public:
    explicit BandLimited(const SpectralSample<Real>& f_hat);
    Real operator()(const Real& x) const;

private:
    std::vector<Real> xi_;
    std::vector<Complex<Real>> c_;  // f^_k dxi / 2pi over the nonzero nodes
};

template <class Real>
class PhaseFunction {
public:
    /// alpha' = lambda exp(r/2) with r given on [a, b]; alpha(a) = alpha_a.
    static PhaseFunction from_r(const Real& lambda, ChebyshevSeries<Real> r, const Real& alpha_a = Real(0),
                                const Real& tail = Real(0));

    const Real& lambda() const noexcept { return lambda_; }
    const Real& a() const noexcept { return r_.a(); }
    const Real& b() const noexcept { return r_.b(); }

    Real r(const Real& t) const { return r_(t); }
    Real dr(const Real& t) const { return dr_(t); }
    Real d2r(const Real& t) const { return d2r_(t); }
    Real alpha(const Real& t) const;
    Real dalpha(const Real& t) const;

    const ChebyshevSeries<Real>& r_series() const noexcept { return r_; }
    const ChebyshevSeries<Real>& alpha_series() const noexcept { return alpha_; }

private:
    void check(const Real& t) const;

    Real lambda_ = 0;
    Real alpha_a_ = 0, alpha_series_at_a_ = 0;
    ChebyshevSeries<Real> r_, dr_, d2r_, alpha_;
};

template <class Real>
struct PhaseOptions {
    Real tail = 0;  // Chebyshev tail for r and exp(r/2); <= 0: precision default
};

template <class Real>
PhaseFunction<Real> build_phase(const SolveResult<Real>& result, const CoefficientProblem<Real>& prob,
                                const PhaseOptions<Real>& opts = {});

/// (u, v) at t in [a, b]; DomainError outside.
template <class Real>
std::pair<Real, Real> eval_basis(const PhaseFunction<Real>& phase, const Real& t);

template <class Real>
struct BasisJet {
    Real u, du, v, dv;
};

/// u, v and their derivatives: u' = -sin(alpha) sqrt(alpha') - cos(alpha) r'/(4 sqrt(alpha')).
template <class Real>
BasisJet<Real> eval_basis_jet(const PhaseFunction<Real>& phase, const Real& t);

/// n Chebyshev extreme points of [a, b] that lie inside [a + e (b - a), b - e (b - a)].
template <class Real>
std::vector<Real> interior_nodes(const Real& a, const Real& b, std::size_t n, double exclude = 0.05);

/// (alpha')^2 - lambda^2 q + alpha'''/(2 alpha') - (3/4)(alpha''/alpha')^2 at each node,
/// written through r as lambda^2 (exp(r) - q) + r''/4 - r'^2/16.
template <class Real>
std::vector<Real> kummer_residual(const PhaseFunction<Real>& phase, const RealFn<Real>& q,
                                  const std::vector<Real>& t_nodes);

template <class Real>
std::vector<Real> kummer_residual(const PhaseFunction<Real>& phase, const CoefficientProblem<Real>& prob,
                                  const std::vector<Real>& t_nodes);

/// ||sigma_b - S[T_b sigma_b] - p||_inf / ||p||_inf with sigma_b = inverse(psi).
template <class Real>
Real integral_equation_residual(const SolveResult<Real>& result, const CoefficientProblem<Real>& prob);

/// Chebyshev series of delta(x(t)) on [a, b] resolved to `tail` relative.
template <class Real>
ChebyshevSeries<Real> delta_series(const SolveResult<Real>& result, const CoefficientProblem<Real>& prob,
                                   const Real& tail);

}  // namespace phasefn
