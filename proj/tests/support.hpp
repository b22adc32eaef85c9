#pragma once

// Shared helpers for the unit and acceptance suites: seeded random samples
// and direct-summation oracles independent of the FFT path.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "phasefn/grid.hpp"
#include "phasefn/problem.hpp"

namespace phasefn::testing {

/// Random Hermitian sample supported on |xi| < frac * xi_max, scaled to the given L1 norm.
template <class Real>
SpectralSample<Real> random_hermitian(const SpectralGrid<Real>& g, std::mt19937_64& rng, Real l1, double frac = 0.5) {
    std::normal_distribution<double> nd;
    SpectralSample<Real> F(g);
    const std::size_t N = g.size();
    using std::abs;
    for (std::size_t k = N / 2; k < N; ++k) {
        if (abs(g.xi(k)) >= Real(frac) * g.xi_max()) continue;
        if (k == N / 2) {
            F.values[k] = Complex<Real>(Real(nd(rng)), 0);
        } else {
            const Complex<Real> z(Real(nd(rng)), Real(nd(rng)));
            F.values[k] = z;
            F.values[g.mirror(k)] = std::conj(z);
        }
    }
    const Real s = l1_norm(F);
    return s > 0 ? (l1 / s) * F : F;
}

/// Direct O(N^2) transform at every frequency node: dx sum_j exp(-i x_j xi_k) f_j.
template <class Real>
std::vector<Complex<Real>> direct_forward(const RealSample<Real>& f) {
    using std::cos;
    using std::sin;
    const auto& g = f.grid;
    std::vector<Complex<Real>> out(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        Complex<Real> s(0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            const Real ph = g.x(j) * g.xi(k);
            s += Complex<Real>(cos(ph), -sin(ph)) * f.values[j];
        }
        out[k] = s * g.dx();
    }
    return out;
}

/// Direct periodic convolution (dxi / 2pi) sum_m F_m G_{k-m}, indices modulo N around xi = 0.
template <class Real>
std::vector<Complex<Real>> direct_convolve(const SpectralSample<Real>& F, const SpectralSample<Real>& G) {
    const auto& g = F.grid;
    const long N = static_cast<long>(g.size()), h = N / 2;
    std::vector<Complex<Real>> out(N);
    for (long k = 0; k < N; ++k) {
        Complex<Real> s(0);
        for (long m = 0; m < N; ++m) {
            // frequency index (k - h) - (m - h) = k - m, shifted back to storage order
            long idx = ((k - m) % N + N) % N;
            idx = (idx + h) % N;
            s += F.values[m] * G.values[idx];
        }
        out[k] = s * (g.dxi() / (2 * pi<Real>()));
    }
    return out;
}

/// q = 1 + sech^2 t with exact derivatives.
template <class Real>
Coefficient<Real> sech2_coefficient(double a = -8, double b = 8, double w = 2.5) {
    using std::cosh;
    using std::tanh;
    Coefficient<Real> c;
    c.q = [](Real t) { const Real s = 1 / cosh(t); return 1 + s * s; };
    c.dq = [](Real t) { const Real s = 1 / cosh(t); return -2 * s * s * tanh(t); };
    c.d2q = [](Real t) {
        const Real s = 1 / cosh(t), th = tanh(t);
        return 4 * s * s * th * th - 2 * s * s * s * s;
    };
    c.interval_a = Real(a);
    c.interval_b = Real(b);
    c.extension_width = Real(w);
    return c;
}

template <class Real>
Coefficient<Real> constant_coefficient(double value, double a = 0, double b = 1) {
    const Real v(value);
    return {[v](Real) { return v; }, [](Real) { return Real(0); }, [](Real) { return Real(0); }, Real(a), Real(b), Real(0)};
}

}  // namespace phasefn::testing
