#pragma once

// Periodic spectral grid on [-L, L) and discrete transforms that approximate
//   f^(xi) = int exp(-i x xi) f(x) dx,   f(x) = (1/2pi) int exp(i x xi) f^(xi) dxi.
// Space nodes x_j = -L + j dx, frequency nodes xi_k = (k - N/2) dxi.

#include <cstddef>
#include <functional>
#include <vector>

#include "phasefn/real.hpp"

namespace phasefn {

template <class Real>
class SpectralGrid {
public:
    SpectralGrid(Real half_width_L, std::size_t n_points);

    const Real& half_width() const noexcept { return L_; }
    std::size_t size() const noexcept { return N_; }
    Real dx() const { return 2 * L_ / Real(N_); }
    Real dxi() const { return pi<Real>() / L_; }
    Real xi_max() const { return pi<Real>() / dx(); }

    Real x(std::size_t j) const { return -L_ + Real(j) * dx(); }
    Real xi(std::size_t k) const { return (Real(k) - Real(N_ / 2)) * dxi(); }
    /// Index of the node -xi_k (Hermitian partner); node 0 pairs with itself.
    std::size_t mirror(std::size_t k) const noexcept { return k == 0 ? 0 : N_ - k; }

    bool operator==(const SpectralGrid& o) const { return N_ == o.N_ && L_ == o.L_; }

private:
    Real L_;
    std::size_t N_;
};

template <class Real>
struct RealSample {
    SpectralGrid<Real> grid;
    std::vector<Real> values;

    explicit RealSample(const SpectralGrid<Real>& g) : grid(g), values(g.size(), Real(0)) {}
    RealSample(const SpectralGrid<Real>& g, std::vector<Real> v);

    static RealSample sample(const SpectralGrid<Real>& g, const std::function<Real(Real)>& f);
};

template <class Real>
struct SpectralSample {
    SpectralGrid<Real> grid;
    std::vector<Complex<Real>> values;

    explicit SpectralSample(const SpectralGrid<Real>& g) : grid(g), values(g.size(), Complex<Real>(0)) {}
    SpectralSample(const SpectralGrid<Real>& g, std::vector<Complex<Real>> v);

    static SpectralSample sample(const SpectralGrid<Real>& g, const std::function<Complex<Real>(Real)>& F);

    /// Smallest node radius R with values == 0 for |xi_k| > R (xi_max if none vanish).
    Real support_radius() const;
    /// max_k |F_k - conj F_{-k}| / max_k |F_k| (0 for the zero sample).
    Real hermitian_defect() const;
};

template <class Real>
SpectralSample<Real> operator+(const SpectralSample<Real>& a, const SpectralSample<Real>& b);
template <class Real>
SpectralSample<Real> operator-(const SpectralSample<Real>& a, const SpectralSample<Real>& b);
template <class Real>
SpectralSample<Real> operator*(const Real& s, const SpectralSample<Real>& a);

template <class Real>
SpectralSample<Real> forward(const RealSample<Real>& f);

/// Relative Hermitian tolerance accepted by inverse().
inline constexpr double kHermitianTol = 1e-10;

template <class Real>
RealSample<Real> inverse(const SpectralSample<Real>& F);

/// forward(inverse(F) * inverse(G)) = (1/2pi) F*G on the periodic frequency grid.
template <class Real>
SpectralSample<Real> convolve(const SpectralSample<Real>& F, const SpectralSample<Real>& G);

/// dxi * sum |F_k|
template <class Real>
Real l1_norm(const SpectralSample<Real>& F);

/// dxi * sum |F_k - G_k|
template <class Real>
Real l1_distance(const SpectralSample<Real>& F, const SpectralSample<Real>& G);

template <class Real>
Real linf_norm(const RealSample<Real>& f);

/// Spectral derivative i xi F (Nyquist node zeroed so the result stays Hermitian).
template <class Real>
SpectralSample<Real> differentiate(const SpectralSample<Real>& F);

/// A-priori max-norm rounding bound of forward(f): 8 eps log2(N) dx sum|f_j|.
template <class Real>
Real forward_rounding_floor(const RealSample<Real>& f);

}  // namespace phasefn
