#pragma once

// Band-limited fixed-point solver. With W_b[f] = f b^/(4 lambda^2 - xi^2) and
// W~_b[f] = -i xi f b^/(4 lambda^2 - xi^2),
//   R[f] = (1/8pi) W~_b[f] * W~_b[f] - 4 lambda^2 exp2*[W_b[f]] + w,
// iterated from psi_0 = w = p^. Then sigma^ = psi b^, nu = F^-1[sigma^ - psi].

#include <memory>
#include <string>
#include <vector>

#include "phasefn/grid.hpp"
#include "phasefn/problem.hpp"

namespace phasefn {

/// Normalized C-infinity step: int_{-1}^{s} exp(1/(u^2-1)) du / int_{-1}^{1}; 0 for s <= -1, 1 for s >= 1.
template <class Real>
Real smooth_step(const Real& s);

template <class Real>
struct Bump {
    SpectralSample<Real> b_hat;
    Real lambda;
    Real c;      // (sqrt2 + 1) lambda / 2
    Real alpha;  // (sqrt2 - 1) lambda / 4
    std::vector<Real> w_mult;        // b^/(4 lambda^2 - xi^2)
    std::vector<Real> w_tilde_mult;  // -xi b^/(4 lambda^2 - xi^2), applied as i * (.)
};

/// Cached per (grid, lambda). Requires xi_max >= 2 sqrt2 lambda.
template <class Real>
std::shared_ptr<const Bump<Real>> make_bump(const SpectralGrid<Real>& grid, const Real& lambda);

template <class Real>
SpectralSample<Real> apply_Wb(const SpectralSample<Real>& f, const Bump<Real>& bump);

template <class Real>
SpectralSample<Real> apply_Wb_tilde(const SpectralSample<Real>& f, const Bump<Real>& bump);

template <class Real>
SpectralSample<Real> apply_R(const SpectralSample<Real>& psi, const SpectralSample<Real>& w_hat,
                             const Bump<Real>& bump);

template <class Real>
struct SolverState {
    SpectralSample<Real> psi;
    SpectralSample<Real> w_hat;
    int iteration = 0;
    std::vector<Real> l1_deltas;  // ||psi_{n+1} - psi_n||_1
    std::vector<Real> psi_l1;     // ||psi_n||_1, n = 0..iteration
    bool certified_convergence = false;  // ||w||_1 <= (pi/2) lambda^2
};

template <class Real>
SolverState<Real> fixed_point_solve(const SpectralSample<Real>& w_hat, const Real& lambda, const Real& tol,
                                    int max_iter = 100);

/// Measured ratios Delta_{n+1}/Delta_n for which ||psi_{n+1}||_1 <= pi lambda^2.
template <class Real>
std::vector<Real> contraction_ratios(const SolverState<Real>& state, const Real& lambda);

template <class Real>
struct BoundsReport {
    HypothesisReport<Real> hypotheses;
    int iterations = 0;
    Real max_contraction_ratio = 0;

    // sigma^ = 0 at |xi| >= sqrt2 lambda
    Real sigma_outside_max = 0;
    bool sigma_support_ok = false;

    // |sigma^| <= (1 + 2 Gamma/lambda) Gamma exp(-mu |xi|) for |xi| < sqrt2 lambda
    Real sigma_slack = Real(1.01);
    Real sigma_floor = 0;
    Real sigma_max_ratio = 0;  // max |sigma^|/bound over resolved nodes
    int sigma_resolved_nodes = 0;
    int sigma_unresolved_nodes = 0;
    bool sigma_decay_ok = false;

    // ||nu||_inf <= (Gamma / 2 mu)(1 + 4 Gamma/lambda) exp(-mu lambda)
    Real nu_slack = Real(1.05);
    Real nu_inf = 0;
    Real nu_bound = 0;
    Real nu_floor = 0;
    bool nu_resolved = false;
    bool nu_ok = false;

    std::string status;  // certified | uncertified | violated
};

template <class Real>
struct SolveResult {
    SpectralSample<Real> psi;        // sigma_b^
    SpectralSample<Real> sigma_hat;  // psi b^
    RealSample<Real> nu;
    RealSample<Real> delta;
    SpectralSample<Real> delta_hat;
    BoundsReport<Real> bounds_report;
    int iterations = 0;
    std::vector<Real> l1_deltas;
};

template <class Real>
SolveResult<Real> extract_solution(const SolverState<Real>& state, const Bump<Real>& bump,
                                   const CoefficientProblem<Real>& prob);

/// F^-1[f^/(4 lambda^2 - xi^2)]; f^ must vanish at |xi| >= 2 lambda.
template <class Real>
RealSample<Real> apply_T(const SpectralSample<Real>& sigma_hat, const Real& lambda);

template <class Real>
SpectralSample<Real> apply_T_hat(const SpectralSample<Real>& sigma_hat, const Real& lambda);

template <class Real>
struct SolveOptions {
    Real tol = 0;  // <= 0: precision default
    int max_iter = 100;
};

/// make_bump + fixed_point_solve + extract_solution; p = 0 short-circuits to sigma = 0.
template <class Real>
SolveResult<Real> solve(const CoefficientProblem<Real>& prob, const SolveOptions<Real>& opts = {});

}  // namespace phasefn
