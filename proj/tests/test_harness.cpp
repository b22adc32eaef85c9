#include <cmath>
#include <memory>

#include "doctest.h"
#include "phasefn/errors.hpp"
#include "phasefn/harness.hpp"
#include "phasefn/oracle.hpp"
#include "support.hpp"

using namespace phasefn;
using phasefn::testing::constant_coefficient;
using phasefn::testing::sech2_coefficient;

TEST_CASE("oracle: constant coefficient and conservation") {
    const double tol = 1e-12;
    for (double lambda : {1.0, 20.0, 100.0}) {
        const auto o = ode_oracle<double>([](double) { return 1.0; }, lambda, -1.0, 1.0, 0.0, lambda, tol);
        for (int i = 0; i <= 200; ++i) {
            const double t = -1 + i / 100.0;
            CHECK(std::abs(o(t)[0] - std::sin(lambda * (t + 1))) <= 10 * tol);
        }
    }
    const double c = 3, lambda = 15;
    const auto o = ode_oracle<double>([c](double) { return c; }, lambda, 0.0, 2.0, 0.7, -1.3, tol);
    const double e0 = 1.3 * 1.3 / (lambda * lambda * c) + 0.7 * 0.7;
    for (int i = 0; i <= 100; ++i) {
        const auto y = o(i / 50.0);
        CHECK(std::abs(y[1] * y[1] / (lambda * lambda * c) + y[0] * y[0] - e0) <= 10 * tol);
    }
    CHECK(o.order == 8);
}

TEST_CASE("oracle: self-consistency under tolerance changes") {
    const RealFn<double> q = [](double t) { return t; };
    const auto ref = ode_oracle<double>(q, 10.0, 1.0, 2.0, 1.0, 0.0, 1e-12, {true});
    CHECK(ref.achieved() <= 10 * 1e-12);
    for (double tol : {1e-8, 1e-10}) {
        const auto a = ode_oracle<double>(q, 10.0, 1.0, 2.0, 1.0, 0.0, tol);
        const auto b = ode_oracle<double>(q, 10.0, 1.0, 2.0, 1.0, 0.0, tol / 2);
        double d = 0;
        for (int i = 0; i <= 100; ++i) d = std::max(d, std::abs(a(1 + i / 100.0)[0] - b(1 + i / 100.0)[0]));
        CHECK(d <= tol);
    }
}

TEST_CASE("oracle: preconditions and errors") {
    const RealFn<double> q = [](double) { return 1.0; };
    CHECK_THROWS_AS(ode_oracle<double>(q, 1.0, 0.0, 1.0, 1.0, 0.0, 1e-17), UsageError);
    CHECK_THROWS_AS(ode_oracle<double>(q, 1.0, 1.0, 0.0, 1.0, 0.0, 1e-10), UsageError);
    const auto o = ode_oracle<double>(q, 1.0, 0.0, 1.0, 1.0, 0.0, 1e-10);
    CHECK_THROWS_AS(o(1.5), DomainError);
    const OdeRhs<double, 2> blowup = [](const double&, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[0] * y[0], 0.0};
    };
    CHECK_THROWS_AS((dop853<double, 2>(blowup, 0.0, 2.0, {1.0, 0.0}, 1e-10)), NumericalError);
}

TEST_CASE("Liouville-Green: constant q") {
    for (double c : {1.0, 4.0}) {
        auto prob = std::make_shared<const CoefficientProblem<double>>(make_problem(constant_coefficient<double>(c, 0, 1), 10.0));
        auto y = std::make_shared<const OracleSolution<double, 2>>(ode_oracle(*prob, 0.3, 2.0, 1e-12));
        const auto lg = liouville_green(prob, y);
        for (double t = 0; t <= 1; t += 0.125) {
            const double x = std::sqrt(c) * t;
            CHECK(lg.phi(x) == doctest::Approx(std::sqrt(std::sqrt(c)) * (*y)(t)[0]).epsilon(1e-13));
        }
        const auto [p0, dp0] = lg.initial_values();
        CHECK(p0 == doctest::Approx(std::sqrt(std::sqrt(c)) * 0.3));
        CHECK(dp0 == doctest::Approx(2.0 / std::sqrt(std::sqrt(c))));
    }
}

TEST_CASE("Liouville-Green: sech^2 residual and round trip") {
    auto prob = std::make_shared<const CoefficientProblem<double>>(make_problem(sech2_coefficient<double>(), 20.0));
    auto y = std::make_shared<const OracleSolution<double, 2>>(ode_oracle(*prob, 1.0, 0.5, 1e-13));
    const auto lg = liouville_green(prob, y);
    const double xb = prob->map.x_b();
    std::vector<double> xs;
    for (int i = 1; i < 100; ++i) xs.push_back(0.05 * xb + 0.9 * xb * i / 100);
    CHECK(lg.residual(xs, 5e-4) <= 1e-6);
    for (double t = -8; t <= 8; t += 0.5)
        CHECK(std::abs(lg.y_back(t) - (*y)(t)[0]) <= 1e-10 * std::max(1.0, std::abs((*y)(t)[0])));
    // phi'(0) against a one-sided difference of phi
    const auto [p0, dp0] = lg.initial_values();
    const double h = 1e-4;
    const double fd = (-25 * lg.phi(0) + 48 * lg.phi(h) - 36 * lg.phi(2 * h) + 16 * lg.phi(3 * h) - 3 * lg.phi(4 * h)) / (12 * h);
    CHECK(p0 == doctest::Approx(lg.phi(0)));
    CHECK(std::abs(fd - dp0) <= 1e-7 * std::abs(dp0));
}

TEST_CASE("basis error: exact phases") {
    const double tol = 1e-12;
    for (double lambda : {10.0, 100.0, 300.0}) {
        const auto prob = make_problem(constant_coefficient<double>(2.0, 0, 1), lambda);
        const auto ph = build_phase(solve(prob), prob);
        const auto [eu, ev] = basis_error(ph, prob, tol);
        CHECK(eu <= 10 * tol);
        CHECK(ev <= 10 * tol);
    }
    const double lambda = 30;
    const auto r = ChebyshevSeries<double>::interpolate([](double t) { return -std::log1p(-t * t); }, -0.9, 0.9, 129);
    const auto ph = PhaseFunction<double>::from_r(lambda, r, -lambda * std::acos(-0.9));
    const RealFn<double> q = [lambda](double t) {
        const double s = 1 - t * t;
        return (2 + t * t + 4 * lambda * lambda * s) / (4 * s * s) / (lambda * lambda);
    };
    const auto [eu, ev] = basis_error(ph, q, tol);
    CHECK(eu <= 10 * tol + 1e-12);
    CHECK(ev <= 10 * tol + 1e-12);
}

TEST_CASE("least-squares slope") {
    CHECK(ls_slope({1, 2, 3}, {2, 4, 6}) == doctest::Approx(2));
    CHECK(ls_slope({0, 1, 2, 3}, {1, -1, -3, -5}) == doctest::Approx(-2));
    CHECK(std::isnan(ls_slope({1}, {1})));
}

TEST_CASE("sweep: constant q") {
    ProblemFile pf = parse_problem_json(R"({"q": "1", "a": 0, "b": 1})");
    SweepOptions so;
    so.lambdas = {20};
    so.no_timing = true;
    const auto rep = run_sweep(pf, so);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].nu_inf == 0.0);
    CHECK(rep.rows[0].cheb_degree <= 2);
    CHECK(rep.rows[0].status == "certified");
    CHECK(rep.rows[0].wall_ms == 0.0);
    CHECK(rep.to_csv().rfind("lambda,iterations,gamma,mu,nu_inf,res_kummer,err_u,err_v,cheb_degree,wall_ms\n", 0) == 0);
}

TEST_CASE("sweep: decay, determinism, failures recorded") {
    ProblemFile pf = parse_problem_json(R"({"q": "1 + sech(t)^2", "a": -8, "b": 8, "extension_width": 2.5})");
    SweepOptions so;
    so.lambdas = {8, 10, 12, 14};
    so.no_timing = true;
    so.threads = 2;
    const auto rep = run_sweep(pf, so);
    std::vector<double> l, lognu;
    for (const auto& r : rep.rows) {
        CHECK(r.status != "error");
        CHECK(r.err_u < 1e-6);
        if (r.floor_limited) continue;
        l.push_back(r.lambda);
        lognu.push_back(std::log(r.nu_inf));
    }
    REQUIRE(l.size() >= 3);
    CHECK(ls_slope(l, lognu) <= -0.9 * rep.rows[0].mu);

    const auto again = run_sweep(pf, so);
    CHECK(again.to_csv() == rep.to_csv());
    const auto j = nlohmann::json::parse(rep.to_json().dump());
    CHECK(j["rows"].size() == 4);
    CHECK(j["rows"][1]["nu_inf"].get<double>() == rep.rows[1].nu_inf);
    CHECK(j["rows"][2]["cheb_degree"].get<int>() == rep.rows[2].cheb_degree);

    SweepOptions bad = so;
    bad.lambdas = {10};
    bad.grid_N = 64;  // too coarse for the bump: recorded, not thrown
    const auto failed = run_sweep(pf, bad);
    CHECK(failed.rows[0].status == "error");
    CHECK(!failed.rows[0].error.empty());
    CHECK(failed.to_csv().find("nan") != std::string::npos);
}

TEST_CASE("report JSON mirrors the bounds report") {
    const auto prob = make_problem(sech2_coefficient<double>(), 40.0);
    const auto sol = solve(prob);
    const auto j = to_json(sol.bounds_report);
    for (const char* k : {"hypotheses", "iterations", "max_contraction_ratio", "sigma_outside_max", "sigma_support_ok",
                          "sigma_slack", "sigma_floor", "sigma_max_ratio", "sigma_resolved_nodes",
                          "sigma_unresolved_nodes", "sigma_decay_ok", "nu_slack", "nu_inf", "nu_bound", "nu_floor",
                          "nu_resolved", "nu_ok", "status"})
        CHECK(j.contains(k));
    CHECK(j["status"] == "certified");
    CHECK(j["hypotheses"]["certified"] == true);
}
