#pragma once

// Independent references: an embedded Runge-Kutta 8(5,3) integrator (Dormand-Prince)
// for y'' + lambda^2 q y = 0, the Liouville-Green transform phi(x) = q^{1/4} y(t(x)),
// and basis errors of a phase function against the integrator.

#include <array>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "phasefn/phase.hpp"
#include "phasefn/problem.hpp"

namespace phasefn {

template <class Real, std::size_t D>
using OdeRhs = std::function<std::array<Real, D>(const Real&, const std::array<Real, D>&)>;

/// Dense solution of a D-dimensional first-order system on [t0, t1].
template <class Real, std::size_t D = 2>
class OracleSolution {
public:
    static constexpr int order = 8;

    OracleSolution(OdeRhs<Real, D> f, std::vector<Real> t, std::vector<std::array<Real, D>> y, std::size_t rejected,
                   Real local_tol)
        : f_(std::move(f)), t_(std::move(t)), y_(std::move(y)), rejected_(rejected), local_tol_(local_tol) {}

    /// State at t in [t0, t1]; re-integrates one partial step from the nearest accepted step start.
    std::array<Real, D> operator()(const Real& t) const;

    const Real& t0() const noexcept { return t_.front(); }
    const Real& t1() const noexcept { return t_.back(); }
    std::size_t steps() const noexcept { return t_.size() - 1; }
    std::size_t rejected() const noexcept { return rejected_; }
    /// Local (per-step) tolerance of the run.
    const Real& local_tol() const noexcept { return local_tol_; }
    /// Global error estimate against a tighter run; 0 when not measured.
    const Real& achieved() const noexcept { return achieved_; }
    void set_achieved(const Real& e) { achieved_ = e; }

private:
    OdeRhs<Real, D> f_;
    std::vector<Real> t_;
    std::vector<std::array<Real, D>> y_;
    std::size_t rejected_ = 0;
    Real local_tol_ = 0, achieved_ = 0;
};

/// Adaptive DOP853 with atol = rtol = tol (tol >= 12 eps); StiffnessError on step-size underflow.
template <class Real, std::size_t D>
OracleSolution<Real, D> dop853(const OdeRhs<Real, D>& f, const Real& t0, const Real& t1, const std::array<Real, D>& y0,
                               const Real& tol);

struct OracleOptions {
    /// Also integrate with a 32x tighter local tolerance, record the difference as achieved()
    /// and return the tighter run.
    bool self_check = false;
};

/// Local tolerance used for a requested global tolerance (global error runs ~40x local on
/// a few hundred oscillations).
inline constexpr double kOracleLocalFactor = 1.0 / 64;

/// y'' + lambda^2 q(t) y = 0 on [a, b] with y(a) = y0, y'(a) = dy0; requires tol >= 40 eps.
template <class Real>
OracleSolution<Real, 2> ode_oracle(const RealFn<Real>& q, const Real& lambda, const Real& a, const Real& b,
                                   const Real& y0, const Real& dy0, const Real& tol, OracleOptions opts = {});

template <class Real>
OracleSolution<Real, 2> ode_oracle(const CoefficientProblem<Real>& prob, const Real& y0, const Real& dy0,
                                   const Real& tol, OracleOptions opts = {});

/// Two solutions of the same equation in one run: state (y1, y1', y2, y2').
template <class Real>
OracleSolution<Real, 4> ode_oracle_pair(const RealFn<Real>& q, const Real& lambda, const Real& a, const Real& b,
                                        const std::array<Real, 4>& init, const Real& tol, OracleOptions opts = {});

/// phi(x) = q(t(x))^{1/4} y(t(x)) on [0, x(b)].
template <class Real>
struct LiouvilleGreen {
    std::shared_ptr<const CoefficientProblem<Real>> prob;
    std::shared_ptr<const OracleSolution<Real, 2>> y;

    Real phi(const Real& x) const;
    /// phi(0) and phi'(0) = (1/4) q'(a) q(a)^{-5/4} y(a) + q(a)^{-1/4} y'(a).
    std::pair<Real, Real> initial_values() const;
    /// y(t) = q(t)^{-1/4} phi(x(t)).
    Real y_back(const Real& t) const;
    /// max |phi'' + lambda^2 phi + p phi / 4| / ||phi||_inf over x nodes, phi'' by the 4th-order
    /// central difference with step h.
    Real residual(const std::vector<Real>& x_nodes, const Real& h) const;
};

template <class Real>
LiouvilleGreen<Real> liouville_green(std::shared_ptr<const CoefficientProblem<Real>> prob,
                                     std::shared_ptr<const OracleSolution<Real, 2>> y);

/// max |u - u~|, max |v - v~| over 400 uniform points of [a, b], with u~, v~ integrated from
/// the phase basis values at t = a.
template <class Real>
std::pair<Real, Real> basis_error(const PhaseFunction<Real>& phase, const RealFn<Real>& q, const Real& tol);

template <class Real>
std::pair<Real, Real> basis_error(const PhaseFunction<Real>& phase, const CoefficientProblem<Real>& prob,
                                  const Real& tol);

}  // namespace phasefn
