#include <cmath>
#include <functional>
#include <ostream>
#include <random>

#include "phasefn/convexp.hpp"
#include "phasefn/harness.hpp"
#include "phasefn/oracle.hpp"
#include "phasefn/phase.hpp"
#include "phasefn/simd/kernels.hpp"

namespace phasefn {

namespace {

SpectralSample<double> random_sample(const SpectralGrid<double>& g, std::mt19937_64& rng, double l1) {
    std::normal_distribution<double> nd;
    SpectralSample<double> F(g);
    const std::size_t N = g.size();
    for (std::size_t k = N / 2; k < N; ++k) {
        if (std::abs(g.xi(k)) >= g.xi_max() / 2) continue;
        if (k == N / 2) {
            F.values[k] = {nd(rng), 0};
        } else {
            F.values[k] = {nd(rng), nd(rng)};
            F.values[g.mirror(k)] = std::conj(F.values[k]);
        }
    }
    return (l1 / l1_norm(F)) * F;
}

Coefficient<double> sech2() {
    Coefficient<double> c;
    c.q = [](double t) { const double s = 1 / std::cosh(t); return 1 + s * s; };
    c.dq = [](double t) { const double s = 1 / std::cosh(t); return -2 * s * s * std::tanh(t); };
    c.d2q = [](double t) {
        const double s = 1 / std::cosh(t), th = std::tanh(t);
        return 4 * s * s * th * th - 2 * s * s * s * s;
    };
    c.interval_a = -8;
    c.interval_b = 8;
    c.extension_width = 2.5;
    return c;
}

bool check_simd() {
    const auto& s = simd::scalar_table();
    const auto& v = simd::active();
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    const std::size_t n = 1031;
    std::vector<simd::cplx> a(n), o1(n), o2(n);
    std::vector<double> m(n);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = {nd(rng), nd(rng)};
        m[k] = nd(rng);
    }
    s.mul_real(o1.data(), a.data(), m.data(), n);
    v.mul_real(o2.data(), a.data(), m.data(), n);
    if (o1 != o2) return false;
    s.mul_imag(o1.data(), a.data(), m.data(), n);
    v.mul_imag(o2.data(), a.data(), m.data(), n);
    if (o1 != o2) return false;
    const double x = s.sum_abs(a.data(), n), y = v.sum_abs(a.data(), n);
    return std::abs(x - y) <= 1e-13 * x;
}

bool check_roundtrip() {
    const SpectralGrid<double> g(10, 256);
    const auto f = RealSample<double>::sample(g, [](double x) { return std::exp(-x * x) * std::cos(3 * x); });
    const auto r = inverse(forward(f));
    double e = 0;
    for (std::size_t j = 0; j < g.size(); ++j) e = std::max(e, std::abs(r.values[j] - f.values[j]));
    return e <= 1e-14;
}

bool check_exp_series() {
    const SpectralGrid<double> g(6, 64);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 5; ++i) {
        const auto p = random_sample(g, rng, 1.0);
        if (l1_distance(exp2_star(p), exp2_star_series(p, 20)) > 1e-12) return false;
    }
    return true;
}

bool check_R_zero() {
    const SpectralGrid<double> g(20, 256);
    std::mt19937_64 rng(3);
    const auto w = random_sample(g, rng, 2.0);
    const auto r = apply_R(SpectralSample<double>(g), w, *make_bump(g, 6.0));
    return r.values == w.values;
}

bool check_flat_phase() {
    Coefficient<double> c{[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }, 0, 1, 0};
    const auto prob = make_problem(c, 10.0);
    const auto sol = solve(prob);
    const auto ph = build_phase(sol, prob);
    if (l1_norm(sol.sigma_hat) != 0) return false;
    for (double t = 0; t <= 1; t += 1.0 / 16)
        if (std::abs(ph.alpha(t) - 10 * t) > 1e-13 * std::max(1.0, 10 * t)) return false;
    return true;
}

bool check_chebyshev() {
    const double lambda = 10;
    const auto r = ChebyshevSeries<double>::interpolate([](double t) { return -std::log1p(-t * t); }, -0.9, 0.9, 129);
    const auto ph = PhaseFunction<double>::from_r(lambda, r, -lambda * std::acos(-0.9));
    const RealFn<double> q = [lambda](double t) {
        const double s = 1 - t * t;
        return (2 + t * t + 4 * lambda * lambda * s) / (4 * s * s) / (lambda * lambda);
    };
    for (double v : kummer_residual(ph, q, interior_nodes(-0.9, 0.9, 65)))
        if (std::abs(v) > 1e-9 * lambda * lambda) return false;
    return true;
}

bool check_sech2() {
    const auto prob = make_problem(sech2(), 40.0);
    const auto st = fixed_point_solve(prob.p_hat, 40.0, 1e-14);
    if (st.iteration > 30) return false;
    for (double r : contraction_ratios(st, 40.0))
        if (r > 0.82) return false;
    const auto sol = extract_solution(st, *make_bump(prob.grid, 40.0), prob);
    return sol.bounds_report.status == "certified" && integral_equation_residual(sol, prob) <= 1e-10;
}

bool check_oracle() {
    const double lambda = 20, tol = 1e-12;
    const auto o = ode_oracle<double>([](double) { return 1.0; }, lambda, 0.0, 1.0, 0.0, lambda, tol);
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        if (std::abs(o(t)[0] - std::sin(lambda * t)) > 10 * tol) return false;
    }
    return true;
}

bool check_wronskian() {
    const auto prob = make_problem(sech2(), 10.0);
    const auto ph = build_phase(solve(prob), prob);
    for (double t = -7.5; t <= 7.5; t += 0.75) {
        const auto j = eval_basis_jet(ph, t);
        if (std::abs(j.u * j.dv - j.du * j.v - 1) > 1e-12) return false;
    }
    return true;
}

}  // namespace

bool run_selftest(std::ostream& out) {
    const std::pair<const char*, std::function<bool()>> checks[] = {
        {"simd kernels match the scalar reference", check_simd},
        {"transform round trip", check_roundtrip},
        {"exp2* agrees with its convolution series", check_exp_series},
        {"R[0] = w", check_R_zero},
        {"constant q gives a flat phase", check_flat_phase},
        {"Chebyshev phase solves Kummer's equation", check_chebyshev},
        {"sech^2 at lambda 40: contraction and certified bounds", check_sech2},
        {"oracle reproduces sin(lambda t)", check_oracle},
        {"Wronskian of the phase basis", check_wronskian},
    };
    bool all = true;
    for (const auto& [name, fn] : checks) {
        bool ok = false;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            out << "  error: " << e.what() << "\n";
        }
        out << (ok ? "PASS " : "FAIL ") << name << "\n";
        all = all && ok;
    }
    return all;
}

}  // namespace phasefn
