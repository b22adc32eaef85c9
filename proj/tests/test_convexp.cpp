#include <cmath>
#include <random>

#include "doctest.h"
#include "phasefn/convexp.hpp"
#include "phasefn/errors.hpp"
#include "support.hpp"

using namespace phasefn;
using phasefn::testing::random_hermitian;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("zero maps to zero") {
    SpectralGrid<double> g(4.0, 64);
    SpectralSample<double> Z(g);
    CHECK(l1_norm(exp1_star(Z)) == 0.0);
    CHECK(l1_norm(exp2_star(Z)) == 0.0);
    for (int n : {1, 2, 7}) CHECK(l1_norm(exp2_star_series(Z, n)) == 0.0);
}

TEST_CASE("exp1 linearizes for tiny input") {
    SpectralGrid<double> g(16.0, 256);
    auto Psi = forward(RealSample<double>::sample(g, [](double x) { return 1e-8 * std::exp(-x * x); }));
    CHECK(l1_distance(exp1_star(Psi), Psi) <= 1e-7 * l1_norm(Psi));
}

TEST_CASE("exp1 and exp2 agree with the defining series") {
    std::mt19937_64 rng(21);
    SpectralGrid<double> g(3.0, 64);
    for (int trial = 0; trial < 10; ++trial) {
        auto Psi = random_hermitian(g, rng, 0.5);
        auto e2 = exp2_star(Psi);
        auto series = exp2_star_series(Psi, 20);
        CHECK(l1_distance(e2, series) <= 1e-12);
        CHECK(l1_distance(exp1_star(Psi), series + Psi) <= 1e-12);
        CHECK(l1_distance(e2 + Psi, exp1_star(Psi)) <= 1e-15);
    }
}

TEST_CASE("two-term series tail bound") {
    std::mt19937_64 rng(4);
    SpectralGrid<double> g(3.0, 64);
    auto Psi = random_hermitian(g, rng, 0.1);
    const double l1 = l1_norm(Psi);
    const double bound = std::pow(l1, 3) / (6 * std::pow(2 * kPi, 2)) * std::exp(l1 / (2 * kPi));
    CHECK(l1_distance(exp2_star_series(Psi, 2), exp2_star(Psi)) <= bound);
}

TEST_CASE("exp2 L1 bound on 100 random samples") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ud(0.01, 6.0);
    SpectralGrid<double> g(5.0, 128);
    for (int trial = 0; trial < 100; ++trial) {
        auto Psi = random_hermitian(g, rng, ud(rng), 0.8);
        const double l1 = l1_norm(Psi);
        CHECK(l1_norm(exp2_star(Psi)) <= l1 * l1 / (4 * kPi) * std::exp(l1 / (2 * kPi)) + 1e-10);
    }
}

TEST_CASE("series error decreases monotonically in the number of terms") {
    std::mt19937_64 rng(13);
    SpectralGrid<double> g(3.0, 64);
    for (int trial = 0; trial < 5; ++trial) {
        auto Psi = random_hermitian(g, rng, 1.0);
        auto e2 = exp2_star(Psi);
        double prev = l1_distance(exp2_star_series(Psi, 1), e2);
        for (int n = 2; n <= 12; ++n) {
            const double cur = l1_distance(exp2_star_series(Psi, n), e2);
            CHECK(cur <= prev + 1e-13);
            prev = cur;
        }
    }
}

TEST_CASE("Schwartz decay is preserved") {
    SpectralGrid<double> g(20.0, 512);
    auto Psi = forward(RealSample<double>::sample(g, [](double x) { return 2.0 * std::exp(-x * x / 2); }));
    auto f = inverse(Psi);
    auto h = inverse(exp2_star(Psi));
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (std::abs(g.x(j)) > 10.0) {
            CHECK(std::abs(f.values[j]) < 1e-13);
            CHECK(std::abs(h.values[j]) < 1e-12);
        }
    }
}

TEST_CASE("overflow guard and oracle limits") {
    SpectralGrid<double> g(4.0, 32);
    auto Psi = forward(RealSample<double>::sample(g, [](double) { return 800.0; }));
    CHECK_THROWS_AS(exp1_star(Psi), MagnitudeError);
    CHECK_THROWS_AS(exp2_star(Psi), MagnitudeError);
    SpectralSample<double> Z(g);
    CHECK_THROWS_AS(exp2_star_series(Z, 31), UsageError);
    CHECK_THROWS_AS(exp2_star_series(SpectralSample<double>(SpectralGrid<double>(1.0, 512)), 3), UsageError);
}

TEST_CASE("quad precision agreement with the series") {
    std::mt19937_64 rng(2);
    SpectralGrid<Quad> g(Quad(3), 64);
    auto Psi = random_hermitian(g, rng, Quad("0.5"));
    CHECK(l1_distance(exp2_star(Psi), exp2_star_series(Psi, 30)) <= Quad("1e-30"));
}
