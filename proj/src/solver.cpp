#include "phasefn/solver.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "phasefn/convexp.hpp"
#include "phasefn/detail/kernels_generic.hpp"
#include "phasefn/errors.hpp"
#include "phasefn/quadrature.hpp"

namespace phasefn {

namespace {

template <class Real>
Real mollifier(const Real& u) {
    using std::exp;
    const Real d = u * u - 1;
    return d < 0 ? Real(exp(1 / d)) : Real(0);
}

template <class Real>
const Real& mollifier_mass() {
    static const Real z = integrate_adaptive<Real>(mollifier<Real>, Real(-1), Real(1), 8 * eps<Real>());
    return z;
}

}  // namespace

template <class Real>
Real smooth_step(const Real& s) {
    if (s <= -1) return Real(0);
    if (s >= 1) return Real(1);
    const Real tol = 8 * eps<Real>();
    const Real z = mollifier_mass<Real>();
    if (s <= 0) return integrate_adaptive<Real>(mollifier<Real>, Real(-1), s, tol) / z;
    return 1 - integrate_adaptive<Real>(mollifier<Real>, s, Real(1), tol) / z;
}

template <class Real>
std::shared_ptr<const Bump<Real>> make_bump(const SpectralGrid<Real>& grid, const Real& lambda) {
    using std::abs;
    using std::sqrt;
    if (!(lambda > 0)) throw UsageError("make_bump: lambda must be positive");
    const Real sqrt2 = sqrt(Real(2));
    if (grid.xi_max() < 2 * sqrt2 * lambda)
        throw ConfigurationError("make_bump: xi_max = " + std::to_string(to_double(grid.xi_max())) +
                                 " below 2 sqrt2 lambda = " + std::to_string(to_double(2 * sqrt2 * lambda)));

    using Key = std::tuple<Real, std::size_t, Real>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const Bump<Real>>> cache;
    const Key key{grid.half_width(), grid.size(), lambda};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    auto bump = std::make_shared<Bump<Real>>(Bump<Real>{SpectralSample<Real>(grid), lambda, (sqrt2 + 1) * lambda / 2,
                                                         (sqrt2 - 1) * lambda / 4, {}, {}});
    const std::size_t N = grid.size();
    bump->w_mult.assign(N, Real(0));
    bump->w_tilde_mult.assign(N, Real(0));
    const Real four_l2 = 4 * lambda * lambda;
    for (std::size_t k = 0; k < N; ++k) {
        if (k < N / 2) continue;  // b^ is even: filled from the mirror below
        const Real xi = grid.xi(k);
        Real b = smooth_step((xi + bump->c) / bump->alpha) - smooth_step((xi - bump->c) / bump->alpha);
        if (b < 0) b = 0;
        if (b > 1) b = 1;
        bump->b_hat.values[k] = b;
        bump->b_hat.values[grid.mirror(k)] = b;
    }
    bump->b_hat.values[0] = 0;
    for (std::size_t k = 0; k < N; ++k) {
        const Real xi = grid.xi(k);
        const Real b = bump->b_hat.values[k].real();
        if (b == 0) continue;
        bump->w_mult[k] = b / (four_l2 - xi * xi);
        bump->w_tilde_mult[k] = -xi * bump->w_mult[k];
    }
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 64) cache.clear();
    cache.emplace(key, bump);
    return bump;
}

template <class Real>
SpectralSample<Real> apply_Wb(const SpectralSample<Real>& f, const Bump<Real>& bump) {
    if (!(f.grid == bump.b_hat.grid)) throw UsageError("apply_Wb: grid mismatch");
    SpectralSample<Real> r(f.grid);
    kern::mul_real<Real>(r.values.data(), f.values.data(), bump.w_mult.data(), r.values.size());
    return r;
}

template <class Real>
SpectralSample<Real> apply_Wb_tilde(const SpectralSample<Real>& f, const Bump<Real>& bump) {
    if (!(f.grid == bump.b_hat.grid)) throw UsageError("apply_Wb_tilde: grid mismatch");
    SpectralSample<Real> r(f.grid);
    kern::mul_imag<Real>(r.values.data(), f.values.data(), bump.w_tilde_mult.data(), r.values.size());
    return r;
}

template <class Real>
SpectralSample<Real> apply_R(const SpectralSample<Real>& psi, const SpectralSample<Real>& w_hat,
                             const Bump<Real>& bump) {
    const SpectralSample<Real> wt = apply_Wb_tilde(psi, bump);
    const SpectralSample<Real> quad = (Real(1) / 4) * convolve(wt, wt);
    const Real four_l2 = 4 * bump.lambda * bump.lambda;
    return quad - four_l2 * exp2_star(apply_Wb(psi, bump)) + w_hat;
}

template <class Real>
SolverState<Real> fixed_point_solve(const SpectralSample<Real>& w_hat, const Real& lambda, const Real& tol,
                                    int max_iter) {
    using std::isfinite;
    if (!(tol > 0)) throw UsageError("fixed_point_solve: tol must be positive");
    if (max_iter < 1) throw UsageError("fixed_point_solve: max_iter must be >= 1");
    const auto bump = make_bump(w_hat.grid, lambda);
    SolverState<Real> st{w_hat, w_hat, 0, {}, {}, false};
    const Real w1 = l1_norm(w_hat);
    st.certified_convergence = w1 <= pi<Real>() / 2 * lambda * lambda;
    const Real target = tol * std::max(w1, Real(1e-300));
    st.psi_l1.push_back(w1);
    while (st.iteration < max_iter) {
        SpectralSample<Real> next = apply_R(st.psi, w_hat, *bump);
        const Real delta = l1_distance(next, st.psi);
        if (!isfinite(delta)) throw NumericalError("fixed_point_solve: iterate is not finite");
        st.psi = std::move(next);
        ++st.iteration;
        st.l1_deltas.push_back(delta);
        st.psi_l1.push_back(l1_norm(st.psi));
        if (delta <= target) return st;
    }
    std::vector<double> hist;
    for (const Real& d : st.l1_deltas) hist.push_back(to_double(d));
    throw IterationError("fixed_point_solve: no convergence in " + std::to_string(max_iter) + " iterations",
                         std::move(hist));
}

template <class Real>
std::vector<Real> contraction_ratios(const SolverState<Real>& state, const Real& lambda) {
    std::vector<Real> r;
    const Real ball = pi<Real>() * lambda * lambda;
    for (std::size_t n = 0; n + 1 < state.l1_deltas.size(); ++n) {
        if (state.psi_l1[n + 1] > ball || state.l1_deltas[n] == 0) continue;
        r.push_back(state.l1_deltas[n + 1] / state.l1_deltas[n]);
    }
    return r;
}

template <class Real>
SpectralSample<Real> apply_T_hat(const SpectralSample<Real>& sigma_hat, const Real& lambda) {
    using std::abs;
    const auto& g = sigma_hat.grid;
    const Real four_l2 = 4 * lambda * lambda;
    SpectralSample<Real> d(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (sigma_hat.values[k] == Complex<Real>(0)) continue;
        const Real xi = g.xi(k);
        if (abs(xi) >= 2 * lambda) throw UsageError("apply_T: sigma^ is not supported inside (-2 lambda, 2 lambda)");
        d.values[k] = sigma_hat.values[k] / (four_l2 - xi * xi);
    }
    return d;
}

template <class Real>
RealSample<Real> apply_T(const SpectralSample<Real>& sigma_hat, const Real& lambda) {
    return inverse(apply_T_hat(sigma_hat, lambda));
}

template <class Real>
SolveResult<Real> extract_solution(const SolverState<Real>& state, const Bump<Real>& bump,
                                   const CoefficientProblem<Real>& prob) {
    using std::abs;
    using std::exp;
    using std::sqrt;
    const auto& g = state.psi.grid;
    const std::size_t N = g.size();
    const Real lambda = bump.lambda;

    SpectralSample<Real> sigma(g);
    for (std::size_t k = 0; k < N; ++k) sigma.values[k] = state.psi.values[k] * bump.b_hat.values[k].real();

    SolveResult<Real> res{state.psi, sigma, inverse(sigma - state.psi), RealSample<Real>(g), SpectralSample<Real>(g),
                          {}, state.iteration, state.l1_deltas};
    res.delta_hat = apply_T_hat(sigma, lambda);
    res.delta = inverse(res.delta_hat);

    BoundsReport<Real>& br = res.bounds_report;
    br.hypotheses = check_hypotheses(prob);
    br.iterations = state.iteration;
    for (const Real& r : contraction_ratios(state, lambda)) br.max_contraction_ratio = std::max(br.max_contraction_ratio, r);

    const Real G = prob.gamma_fit, mu = prob.mu_fit;
    const Real edge = sqrt(Real(2)) * lambda;
    br.sigma_floor = forward_rounding_floor(inverse(state.psi)) + prob.p_floor;
    br.sigma_decay_ok = true;
    for (std::size_t k = 0; k < N; ++k) {
        const Real xi = abs(g.xi(k));
        const Real a = abs(sigma.values[k]);
        if (xi >= edge) {
            br.sigma_outside_max = std::max(br.sigma_outside_max, a);
            continue;
        }
        const Real bound = prob.degenerate ? Real(0) : (1 + 2 * G / lambda) * G * exp(-mu * xi);
        if (bound >= br.sigma_floor) {
            ++br.sigma_resolved_nodes;
            if (bound > 0) br.sigma_max_ratio = std::max(br.sigma_max_ratio, a / bound);
            if (a > br.sigma_slack * bound) br.sigma_decay_ok = false;
        } else {
            ++br.sigma_unresolved_nodes;
            if (a > br.sigma_slack * bound + br.sigma_floor) br.sigma_decay_ok = false;
        }
    }
    br.sigma_support_ok = br.sigma_outside_max == 0;

    br.nu_inf = linf_norm(res.nu);
    br.nu_bound = prob.degenerate ? Real(0) : G / (2 * mu) * (1 + 4 * G / lambda) * exp(-mu * lambda);
    br.nu_floor = g.xi_max() / pi<Real>() * br.sigma_floor;
    br.nu_resolved = br.nu_bound >= br.nu_floor;
    br.nu_ok = br.nu_inf <= br.nu_slack * br.nu_bound + (br.nu_resolved ? Real(0) : br.nu_floor);

    const bool checks = br.sigma_support_ok && br.sigma_decay_ok && br.nu_ok;
    if (!br.hypotheses.certified()) br.status = "uncertified";
    else br.status = checks ? "certified" : "violated";
    return res;
}

template <class Real>
SolveResult<Real> solve(const CoefficientProblem<Real>& prob, const SolveOptions<Real>& opts) {
    const Real tol = opts.tol > 0 ? opts.tol : PrecisionDefaults<Real>::solve_tol();
    const auto bump = make_bump(prob.grid, prob.lambda);
    if (prob.degenerate) {
        SolverState<Real> st{SpectralSample<Real>(prob.grid), prob.p_hat, 0, {}, {Real(0)}, true};
        return extract_solution(st, *bump, prob);
    }
    return extract_solution(fixed_point_solve(prob.p_hat, prob.lambda, tol, opts.max_iter), *bump, prob);
}

#define PHASEFN_INSTANTIATE_SOLVER(R)                                                                          \
    template R smooth_step(const R&);                                                                          \
    template std::shared_ptr<const Bump<R>> make_bump(const SpectralGrid<R>&, const R&);                       \
    template SpectralSample<R> apply_Wb(const SpectralSample<R>&, const Bump<R>&);                             \
    template SpectralSample<R> apply_Wb_tilde(const SpectralSample<R>&, const Bump<R>&);                       \
    template SpectralSample<R> apply_R(const SpectralSample<R>&, const SpectralSample<R>&, const Bump<R>&);    \
    template SolverState<R> fixed_point_solve(const SpectralSample<R>&, const R&, const R&, int);              \
    template std::vector<R> contraction_ratios(const SolverState<R>&, const R&);                               \
    template SolveResult<R> extract_solution(const SolverState<R>&, const Bump<R>&, const CoefficientProblem<R>&); \
    template RealSample<R> apply_T(const SpectralSample<R>&, const R&);                                        \
    template SpectralSample<R> apply_T_hat(const SpectralSample<R>&, const R&);                                \
    template SolveResult<R> solve(const CoefficientProblem<R>&, const SolveOptions<R>&);

PHASEFN_INSTANTIATE_SOLVER(double)
PHASEFN_INSTANTIATE_SOLVER(Quad)

}  // namespace phasefn
