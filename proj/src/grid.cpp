#include "phasefn/grid.hpp"

#include <bit>
#include <string>

#include "phasefn/detail/fft.hpp"
#include "phasefn/detail/kernels_generic.hpp"
#include "phasefn/errors.hpp"

namespace phasefn {

template <class Real>
SpectralGrid<Real>::SpectralGrid(Real half_width_L, std::size_t n_points) : L_(half_width_L), N_(n_points) {
    if (!(L_ > 0)) throw UsageError("grid half-width must be positive");
    if (N_ < 16 || !std::has_single_bit(N_))
        throw UsageError("grid size must be a power of two >= 16, got " + std::to_string(N_));
}

template <class Real>
RealSample<Real>::RealSample(const SpectralGrid<Real>& g, std::vector<Real> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw UsageError("RealSample length does not match grid");
}

template <class Real>
RealSample<Real> RealSample<Real>::sample(const SpectralGrid<Real>& g, const std::function<Real(Real)>& f) {
    RealSample s(g);
    for (std::size_t j = 0; j < g.size(); ++j) s.values[j] = f(g.x(j));
    return s;
}

template <class Real>
SpectralSample<Real>::SpectralSample(const SpectralGrid<Real>& g, std::vector<Complex<Real>> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw UsageError("SpectralSample length does not match grid");
}

template <class Real>
SpectralSample<Real> SpectralSample<Real>::sample(const SpectralGrid<Real>& g,
                                                  const std::function<Complex<Real>(Real)>& F) {
    SpectralSample s(g);
    for (std::size_t k = 0; k < g.size(); ++k) s.values[k] = F(g.xi(k));
    return s;
}

template <class Real>
Real SpectralSample<Real>::support_radius() const {
    using std::abs;
    const std::size_t N = grid.size();
    if (values[0] != Complex<Real>(0)) return grid.xi_max();
    Real r = 0;
    for (std::size_t k = 1; k < N; ++k)
        if (values[k] != Complex<Real>(0)) r = std::max(r, Real(abs(grid.xi(k))));
    return r;
}

template <class Real>
Real SpectralSample<Real>::hermitian_defect() const {
    using std::abs;
    const std::size_t N = grid.size();
    Real scale = 0, defect = 0;
    for (std::size_t k = 0; k < N; ++k) {
        scale = std::max(scale, Real(abs(values[k])));
        defect = std::max(defect, Real(abs(values[k] - std::conj(values[grid.mirror(k)]))));
    }
    return scale > 0 ? defect / scale : Real(0);
}

namespace {

template <class Real>
void require_same_grid(const SpectralGrid<Real>& a, const SpectralGrid<Real>& b) {
    if (!(a == b)) throw UsageError("samples live on different grids");
}

}  // namespace

template <class Real>
SpectralSample<Real> operator+(const SpectralSample<Real>& a, const SpectralSample<Real>& b) {
    require_same_grid(a.grid, b.grid);
    SpectralSample<Real> r(a.grid);
    for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = a.values[k] + b.values[k];
    return r;
}

template <class Real>
SpectralSample<Real> operator-(const SpectralSample<Real>& a, const SpectralSample<Real>& b) {
    require_same_grid(a.grid, b.grid);
    SpectralSample<Real> r(a.grid);
    for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = a.values[k] - b.values[k];
    return r;
}

template <class Real>
SpectralSample<Real> operator*(const Real& s, const SpectralSample<Real>& a) {
    SpectralSample<Real> r(a.grid);
    for (std::size_t k = 0; k < r.values.size(); ++k) r.values[k] = a.values[k] * s;
    return r;
}

// With N/2 even, exp(-i x_j xi_k) = (-1)^j (-1)^k exp(-2 pi i j k / N).
template <class Real>
SpectralSample<Real> forward(const RealSample<Real>& f) {
    using std::isfinite;
    const std::size_t N = f.grid.size();
    SpectralSample<Real> F(f.grid);
    for (std::size_t j = 0; j < N; ++j) {
        if (!isfinite(f.values[j])) throw NumericalError("forward: non-finite input sample");
        F.values[j] = Complex<Real>(f.values[j], 0);
    }
    kern::alternate_scale<Real>(F.values.data(), Real(1), N);
    fft::forward<Real>(F.values.data(), N);
    kern::alternate_scale<Real>(F.values.data(), f.grid.dx(), N);
    // Exact Hermitian symmetry: the input is real, so discard the rounding asymmetry.
    F.values[0] = Complex<Real>(F.values[0].real(), 0);
    for (std::size_t k = 1; k < N / 2; ++k) {
        const Complex<Real> a = F.values[k], b = std::conj(F.values[N - k]);
        const Complex<Real> m = (a + b) / Real(2);
        F.values[k] = m;
        F.values[N - k] = std::conj(m);
    }
    F.values[N / 2] = Complex<Real>(F.values[N / 2].real(), 0);
    return F;
}

template <class Real>
RealSample<Real> inverse(const SpectralSample<Real>& F) {
    const std::size_t N = F.grid.size();
    const Real defect = F.hermitian_defect();
    if (defect > Real(kHermitianTol))
        throw UsageError("inverse: Hermitian symmetry violated (relative defect " +
                         std::to_string(to_double(defect)) + ")");
    std::vector<Complex<Real>> buf(F.values);
    kern::alternate_scale<Real>(buf.data(), Real(1), N);
    fft::backward<Real>(buf.data(), N);
    kern::alternate_scale<Real>(buf.data(), Real(1) / (Real(N) * F.grid.dx()), N);
    RealSample<Real> f(F.grid);
    for (std::size_t j = 0; j < N; ++j) f.values[j] = buf[j].real();
    return f;
}

template <class Real>
SpectralSample<Real> convolve(const SpectralSample<Real>& F, const SpectralSample<Real>& G) {
    require_same_grid(F.grid, G.grid);
    const RealSample<Real> f = inverse(F);
    const RealSample<Real> g = inverse(G);
    RealSample<Real> h(F.grid);
    kern::mul_pointwise<Real>(h.values.data(), f.values.data(), g.values.data(), h.values.size());
    return forward(h);
}

template <class Real>
Real l1_norm(const SpectralSample<Real>& F) {
    return F.grid.dxi() * kern::sum_abs<Real>(F.values.data(), F.values.size());
}

template <class Real>
Real l1_distance(const SpectralSample<Real>& F, const SpectralSample<Real>& G) {
    require_same_grid(F.grid, G.grid);
    return F.grid.dxi() * kern::sum_abs_diff<Real>(F.values.data(), G.values.data(), F.values.size());
}

template <class Real>
Real linf_norm(const RealSample<Real>& f) {
    return kern::max_abs<Real>(f.values.data(), f.values.size());
}

template <class Real>
SpectralSample<Real> differentiate(const SpectralSample<Real>& F) {
    const std::size_t N = F.grid.size();
    std::vector<Real> m(N);
    for (std::size_t k = 0; k < N; ++k) m[k] = F.grid.xi(k);
    m[0] = 0;
    SpectralSample<Real> D(F.grid);
    kern::mul_imag<Real>(D.values.data(), F.values.data(), m.data(), N);
    return D;
}

template <class Real>
Real forward_rounding_floor(const RealSample<Real>& f) {
    using std::abs;
    Real s = 0;
    for (const Real& v : f.values) s += abs(v);
    const Real log2n = Real(std::bit_width(f.grid.size()) - 1);
    return 8 * eps<Real>() * log2n * f.grid.dx() * s;
}

#define PHASEFN_INSTANTIATE_GRID(R)                                                        \
    template class SpectralGrid<R>;                                                        \
    template struct RealSample<R>;                                                         \
    template struct SpectralSample<R>;                                                     \
    template SpectralSample<R> operator+(const SpectralSample<R>&, const SpectralSample<R>&); \
    template SpectralSample<R> operator-(const SpectralSample<R>&, const SpectralSample<R>&); \
    template SpectralSample<R> operator*(const R&, const SpectralSample<R>&);              \
    template SpectralSample<R> forward(const RealSample<R>&);                              \
    template RealSample<R> inverse(const SpectralSample<R>&);                              \
    template SpectralSample<R> convolve(const SpectralSample<R>&, const SpectralSample<R>&); \
    template R l1_norm(const SpectralSample<R>&);                                          \
    template R l1_distance(const SpectralSample<R>&, const SpectralSample<R>&);            \
    template R linf_norm(const RealSample<R>&);                                            \
    template SpectralSample<R> differentiate(const SpectralSample<R>&);                    \
    template R forward_rounding_floor(const RealSample<R>&);

PHASEFN_INSTANTIATE_GRID(double)
PHASEFN_INSTANTIATE_GRID(Quad)

}  // namespace phasefn
