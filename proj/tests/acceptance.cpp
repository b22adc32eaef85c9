// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "phasefn/convexp.hpp"
#include "phasefn/harness.hpp"
#include "phasefn/oracle.hpp"
#include "phasefn/phase.hpp"
#include "phasefn/solver.hpp"
#include "support.hpp"

using namespace phasefn;
using phasefn::testing::constant_coefficient;
using phasefn::testing::direct_convolve;
using phasefn::testing::random_hermitian;
using phasefn::testing::sech2_coefficient;

namespace {

// Pinned tolerances.
constexpr double kC1Alpha = 1e-13;
constexpr double kC1Basis = 1e-11;
constexpr double kC1OracleTol = 1e-13;
constexpr double kC2Residual = 1e-9;  // times lambda^2
constexpr double kC3Ratio = 0.82;
constexpr int kC3MaxIter = 30;
constexpr double kC3Tol = 1e-14;
constexpr double kC5NuSlope = 0.9;
constexpr double kC5ErrFactor = 2.0;
constexpr double kC5Floor = 1e-15;
constexpr int kC6Spread = 5;
constexpr double kC7Series = 1e-12;
constexpr double kC7Convolve = 1e-10;
constexpr double kC8Residual = 1e-10;
constexpr double kC9Residual = 1e-6;
constexpr double kC9Step = 5e-4;
constexpr double kC9OracleTol = 1e-13;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail, double seconds) {
    std::printf("criterion %d %-34s %s  %s  (%.1fs)\n", id, name, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

void run(int id, const char* name, const std::function<bool(std::string&)>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    report(id, name, ok, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

bool c1_constant(std::string& d) {
    bool ok = true;
    double worst_alpha = 0, worst_basis = 0, worst_sigma = 0, worst_nu = 0;
    for (double lambda : {10.0, 100.0}) {
        const auto prob = make_problem(constant_coefficient<double>(1.0, 0, 1), lambda);
        const auto sol = solve(prob);
        for (const auto& z : sol.sigma_hat.values) worst_sigma = std::max(worst_sigma, std::abs(z));
        for (double v : sol.nu.values) worst_nu = std::max(worst_nu, std::abs(v));
        const auto ph = build_phase(sol, prob);
        for (int i = 1; i <= 200; ++i) {
            const double t = i / 200.0, exact = lambda * t;
            worst_alpha = std::max(worst_alpha, std::abs(ph.alpha(t) - exact) / exact);
        }
        const auto [eu, ev] = basis_error(ph, prob, kC1OracleTol);
        worst_basis = std::max({worst_basis, eu, ev});
    }
    ok = worst_sigma == 0 && worst_nu == 0 && worst_alpha <= kC1Alpha && worst_basis <= kC1Basis;
    d = fmt("sigma=%.1e nu=%.1e", worst_sigma, worst_nu) + fmt(" alpha_rel=%.2e basis=%.2e", worst_alpha, worst_basis);
    return ok;
}

bool c2_chebyshev(std::string& d) {
    const double a = -0.9, b = 0.9;
    double worst = 0;
    for (double lambda : {10.0, 50.0}) {
        const auto r = ChebyshevSeries<double>::interpolate([](double t) { return -std::log1p(-t * t); }, a, b, 129);
        const auto ph = PhaseFunction<double>::from_r(lambda, r, -lambda * std::acos(a));
        const RealFn<double> q = [lambda](double t) {
            const double s = 1 - t * t;
            return (2 + t * t + 4 * lambda * lambda * s) / (4 * s * s) / (lambda * lambda);
        };
        for (double res : kummer_residual(ph, q, interior_nodes(a, b, 201)))
            worst = std::max(worst, std::abs(res) / (lambda * lambda));
    }
    d = fmt("max residual/lambda^2=%.2e (limit %.0e)", worst, kC2Residual);
    return worst <= kC2Residual;
}

bool c3_contraction(std::string& d) {
    const double lambda = 40;
    const auto prob = make_problem(sech2_coefficient<double>(), lambda);
    const auto st = fixed_point_solve(prob.p_hat, prob.lambda, kC3Tol);
    double worst = 0;
    const auto ratios = contraction_ratios(st, lambda);
    for (double r : ratios) worst = std::max(worst, r);
    d = fmt("iterations=%.0f max_ratio=%.3f ratios=%.0f", st.iteration, worst, double(ratios.size()));
    return !ratios.empty() && worst <= kC3Ratio && st.iteration <= kC3MaxIter;
}

bool c4_bounds(std::string& d) {
    const auto probe = make_problem(sech2_coefficient<Quad>(), Quad(40));
    const double threshold = to_double(check_hypotheses(probe).lambda_threshold);
    const double l0 = std::ceil(threshold);
    bool ok = true;
    for (double lambda : {l0 + 1, l0 + 5}) {
        const auto prob = make_problem(sech2_coefficient<Quad>(), Quad(lambda));
        const auto sol = solve(prob);
        const auto& br = sol.bounds_report;
        const bool row = br.status == "certified" && br.sigma_support_ok && br.sigma_decay_ok && br.nu_ok;
        ok = ok && row;
        d += fmt("lambda=%.0f sigma_ratio=%.3f nu/bound=%.2e ", lambda, to_double(br.sigma_max_ratio),
                 to_double(br.nu_inf / br.nu_bound));
        d += br.status + "; ";
    }
    d += fmt("threshold=%.2f", threshold);
    return ok;
}

bool c5_decay(std::string& d) {
    ProblemFile pf = parse_problem_json(R"({"q": "1 + sech(t)^2", "a": -8, "b": 8, "extension_width": 2.5})");
    SweepOptions so;
    so.lambdas = {15, 20, 25, 30};
    so.precision = Precision::quad;
    so.no_timing = true;
    const auto rep = run_sweep(pf, so);
    std::vector<double> l, ln, le, la, lna, lea;
    double mu = 0;
    for (const auto& r : rep.rows) {
        if (r.status == "error") {
            d = "row error: " + r.error;
            return false;
        }
        mu = r.mu;
        la.push_back(r.lambda);
        lna.push_back(std::log(r.nu_inf));
        lea.push_back(std::log(r.err_u));
        if (r.floor_limited || r.nu_inf < kC5Floor) continue;
        l.push_back(r.lambda);
        ln.push_back(std::log(r.nu_inf));
        le.push_back(std::log(r.err_u));
    }
    if (l.size() < 2) {
        d = "fewer than two rows above the floor";
        return false;
    }
    const double snu = ls_slope(l, ln), serr = ls_slope(l, le);
    const bool ok = snu <= -kC5NuSlope * mu && serr < 0 && serr <= -mu / kC5ErrFactor && serr >= -mu * kC5ErrFactor;
    d = fmt("mu=%.4f rows=%.0f", mu, double(l.size())) + fmt(" slope_nu=%.3f slope_err=%.3f", snu, serr) +
        fmt(" (all rows: %.3f %.3f)", ls_slope(la, lna), ls_slope(la, lea));
    return ok;
}

bool c6_degree(std::string& d) {
    int lo = 1 << 30, hi = 0;
    for (double lambda : {20.0, 40.0, 80.0, 160.0}) {
        const auto prob = make_problem(sech2_coefficient<double>(), lambda);
        const auto sol = solve(prob);
        const double tail = std::min(PrecisionDefaults<double>::cheb_tail(), kDegreeTail / 10);
        const int deg = static_cast<int>(delta_series(sol, prob, tail).tail_degree(kDegreeTail));
        lo = std::min(lo, deg);
        hi = std::max(hi, deg);
    }
    d = fmt("degree range [%.0f, %.0f]", lo, hi);
    return hi - lo <= kC6Spread;
}

bool c7_oracles(std::string& d) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ud(0.05, 1.0);
    SpectralGrid<double> g(3.0, 64);
    double worst_series = 0, worst_conv = 0;
    for (int trial = 0; trial < 25; ++trial) {
        const auto Psi = random_hermitian(g, rng, ud(rng));
        worst_series = std::max(worst_series, l1_distance(exp2_star(Psi), exp2_star_series(Psi, 20)));
        const auto G = random_hermitian(g, rng, ud(rng));
        const auto fast = convolve(Psi, G);
        const auto slow = direct_convolve(Psi, G);
        for (std::size_t k = 0; k < slow.size(); ++k) worst_conv = std::max(worst_conv, std::abs(fast.values[k] - slow[k]));
    }
    d = fmt("exp2 L1=%.2e convolve max=%.2e", worst_series, worst_conv);
    return worst_series <= kC7Series && worst_conv <= kC7Convolve;
}

bool c8_integral(std::string& d) {
    const auto prob = make_problem(sech2_coefficient<double>(), 40.0);
    const auto sol = solve(prob);
    const double res = integral_equation_residual(sol, prob);
    d = fmt("relative residual=%.2e", res);
    return res <= kC8Residual;
}

bool c9_liouville(std::string& d) {
    auto prob = std::make_shared<const CoefficientProblem<double>>(make_problem(sech2_coefficient<double>(), 20.0));
    auto y = std::make_shared<const OracleSolution<double, 2>>(ode_oracle(*prob, 1.0, 0.5, kC9OracleTol));
    const auto lg = liouville_green(prob, y);
    const double xb = prob->map.x_b();
    std::vector<double> xs;
    for (int i = 1; i < 200; ++i) xs.push_back(0.05 * xb + 0.9 * xb * i / 200);
    const double res = lg.residual(xs, kC9Step);
    d = fmt("relative residual=%.2e (h=%.0e)", res, kC9Step);
    return res <= kC9Residual;
}

}  // namespace

int main() {
    run(1, "constant-coefficient exactness", c1_constant);
    run(2, "Chebyshev closed form", c2_chebyshev);
    run(3, "contraction measurement", c3_contraction);
    run(4, "bound suite (quad)", c4_bounds);
    run(5, "decay-rate reproduction (quad)", c5_decay);
    run(6, "lambda-independent degree", c6_degree);
    run(7, "oracle equivalence", c7_oracles);
    run(8, "integral-equation residual", c8_integral);
    run(9, "Liouville-Green residual", c9_liouville);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
