#include <cmath>
#include <random>

#include "doctest.h"
#include "phasefn/convexp.hpp"
#include "phasefn/errors.hpp"
#include "phasefn/solver.hpp"
#include "support.hpp"

using namespace phasefn;
using phasefn::testing::random_hermitian;

TEST_CASE("smooth step") {
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(-3.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    double prev = 0;
    for (int i = -99; i <= 99; ++i) {
        const double s = i / 100.0;
        const double v = smooth_step(s);
        CHECK(v >= prev);
        CHECK(v + smooth_step(-s) == doctest::Approx(1.0).epsilon(1e-14));
        prev = v;
    }
    CHECK(smooth_step(Quad(0)) == Quad(1) / 2);
}

TEST_CASE("bump: plateau, support, symmetry, range") {
    const SpectralGrid<double> g(30, 1024);
    for (double lambda : {5.0, 12.0, 18.0}) {
        CAPTURE(lambda);
        const auto b = make_bump(g, lambda);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double xi = std::abs(g.xi(k));
            const double v = b->b_hat.values[k].real();
            CHECK(b->b_hat.values[k].imag() == 0.0);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (xi <= lambda) CHECK(v == 1.0);
            if (xi >= std::sqrt(2.0) * lambda) CHECK(v == 0.0);
            CHECK(v == b->b_hat.values[g.mirror(k)].real());
        }
        CHECK(make_bump(g, lambda).get() == b.get());
    }
    CHECK_THROWS_AS(make_bump(g, 40.0), ConfigurationError);
    CHECK_THROWS_AS(make_bump(g, -1.0), UsageError);
}

TEST_CASE("W_b and W~_b multiplier bounds") {
    // |b^/(4 lambda^2 - xi^2)| <= 1/(2 lambda^2) and |xi b^/(...)| <= sqrt2/(2 lambda) on the support
    const SpectralGrid<double> g(20, 512);
    const double lambda = 12;
    const auto b = make_bump(g, lambda);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = random_hermitian(g, rng, 1.0 + trial, 0.9);
        const double n1 = l1_norm(f);
        CHECK(l1_norm(apply_Wb(f, *b)) <= n1 / (2 * lambda * lambda) * (1 + 1e-12));
        CHECK(l1_norm(apply_Wb_tilde(f, *b)) <= std::sqrt(2.0) * n1 / (2 * lambda) * (1 + 1e-12));
        CHECK(apply_Wb_tilde(f, *b).hermitian_defect() <= 1e-14 * n1);
    }
}

TEST_CASE("R[0] = w exactly") {
    const SpectralGrid<double> g(20, 256);
    const auto b = make_bump(g, 6.0);
    std::mt19937_64 rng(3);
    const auto w = random_hermitian(g, rng, 5.0);
    const auto r = apply_R(SpectralSample<double>(g), w, *b);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(r.values[k] == w.values[k]);
}

TEST_CASE("apply_R matches the convolution-series composition") {
    const SpectralGrid<double> g(6, 64);
    const double lambda = 3;
    const auto b = make_bump(g, lambda);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const auto psi = random_hermitian(g, rng, 20.0, 0.6);
        const auto w = random_hermitian(g, rng, 2.0, 0.6);
        const auto wt = apply_Wb_tilde(psi, *b);
        SpectralSample<double> conv(g);
        const auto d = phasefn::testing::direct_convolve(wt, wt);
        for (std::size_t k = 0; k < g.size(); ++k) conv.values[k] = d[k] / 4.0;
        const auto oracle = conv - 4 * lambda * lambda * exp2_star_series(apply_Wb(psi, *b), 25) + w;
        const auto r = apply_R(psi, w, *b);
        CHECK(l1_distance(r, oracle) <= 1e-11 * std::max(1.0, l1_norm(oracle)));
    }
}

TEST_CASE("w = 0 converges in one iteration") {
    const SpectralGrid<double> g(20, 256);
    const auto st = fixed_point_solve(SpectralSample<double>(g), 6.0, 1e-14);
    CHECK(st.iteration == 1);
    CHECK(l1_norm(st.psi) == 0.0);
}

TEST_CASE("sech^2 at lambda = 40: contraction, ball invariance, residual") {
    const auto prob = make_problem(phasefn::testing::sech2_coefficient<double>(), 40.0);
    const auto hyp = check_hypotheses(prob);
    REQUIRE(hyp.certified());
    const double tol = 1e-14;
    const auto st = fixed_point_solve(prob.p_hat, prob.lambda, tol);
    CHECK(st.iteration <= 30);
    CHECK(st.certified_convergence);
    const double ball = M_PI * 40.0 * 40.0;
    for (const double n1 : st.psi_l1) CHECK(n1 <= 0.9 * ball);
    for (const double r : contraction_ratios(st, 40.0)) CHECK(r <= 0.82);
    const auto b = make_bump(prob.grid, prob.lambda);
    const auto res = apply_R(st.psi, prob.p_hat, *b);
    CHECK(l1_distance(res, st.psi) <= 10 * tol * l1_norm(prob.p_hat));

    const auto sol = extract_solution(st, *b, prob);
    CHECK(sol.bounds_report.sigma_support_ok);
    CHECK(sol.bounds_report.status != "violated");
    for (std::size_t k = 0; k < prob.grid.size(); ++k) {
        if (std::abs(prob.grid.xi(k)) >= std::sqrt(2.0) * 40.0) CHECK(sol.sigma_hat.values[k] == std::complex<double>(0));
    }
}

TEST_CASE("iteration count roughly lambda-independent") {
    std::vector<int> counts;
    for (double lambda : {20.0, 40.0, 80.0}) {
        const auto prob = make_problem(phasefn::testing::sech2_coefficient<double>(), lambda);
        counts.push_back(fixed_point_solve(prob.p_hat, prob.lambda, 1e-14).iteration);
    }
    for (int c : counts) {
        CHECK(c <= 30);
        CHECK(std::abs(c - counts[1]) <= 3);
    }
}

TEST_CASE("apply_T inverts the Helmholtz multiplier") {
    const SpectralGrid<double> g(20, 512);
    const double lambda = 10;
    const auto b = make_bump(g, lambda);
    std::mt19937_64 rng(9);
    auto s = random_hermitian(g, rng, 3.0, 0.9);
    for (std::size_t k = 0; k < g.size(); ++k) s.values[k] *= b->b_hat.values[k].real();
    const auto delta = apply_T(s, lambda);
    const auto dh = forward(delta);
    SpectralSample<double> lhs(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double xi = g.xi(k);
        lhs.values[k] = (4 * lambda * lambda - xi * xi) * dh.values[k];
    }
    CHECK(l1_distance(lhs, s) <= 1e-12 * l1_norm(s));

    // spike at xi = 0: delta is the constant m / (2 pi) / (4 lambda^2)
    SpectralSample<double> spike(g);
    spike.values[g.size() / 2] = 2.0;
    const auto c = apply_T(spike, lambda);
    for (double v : c.values) CHECK(v == doctest::Approx(2.0 * g.dxi() / (2 * M_PI) / (4 * lambda * lambda)));

    SpectralSample<double> wide(g);
    wide.values[g.size() / 2 + 140] = 1.0;
    wide.values[g.size() / 2 - 140] = 1.0;
    CHECK_THROWS_AS(apply_T(wide, lambda), UsageError);
}

TEST_CASE("constant q: solve short-circuits to zero") {
    for (double lambda : {10.0, 100.0}) {
        const auto prob = make_problem(phasefn::testing::constant_coefficient<double>(1.0), lambda);
        const auto sol = solve(prob);
        CHECK(l1_norm(sol.sigma_hat) == 0.0);
        CHECK(linf_norm(sol.nu) == 0.0);
        CHECK(sol.bounds_report.status == "certified");
    }
}

TEST_CASE("non-convergence raises IterationError with history") {
    const auto prob = make_problem(phasefn::testing::sech2_coefficient<double>(), 40.0);
    try {
        fixed_point_solve(prob.p_hat, prob.lambda, 1e-30, 3);
        FAIL("expected IterationError");
    } catch (const IterationError& e) {
        CHECK(e.deltas().size() == 3);
    }
}
