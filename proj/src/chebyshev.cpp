#include "phasefn/chebyshev.hpp"

#include <cmath>

#include "phasefn/detail/fft.hpp"
#include "phasefn/errors.hpp"

namespace phasefn {

template <class Real>
ChebyshevSeries<Real>::ChebyshevSeries(Real a, Real b, std::vector<Real> coeffs) : a_(a), b_(b), c_(std::move(coeffs)) {
    if (!(a_ < b_)) throw UsageError("Chebyshev interval needs a < b");
    if (c_.empty()) c_.push_back(Real(0));
}

template <class Real>
std::vector<Real> chebyshev_points(std::size_t n, const Real& a, const Real& b) {
    using std::cos;
    std::vector<Real> t(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Real s = cos(pi<Real>() * Real(j) / Real(n - 1));
        t[j] = (a + b) / 2 + (b - a) / 2 * s;
    }
    return t;
}

template <class Real>
ChebyshevSeries<Real> ChebyshevSeries<Real>::from_values(const std::vector<Real>& values, Real a, Real b) {
    const std::size_t n = values.size();
    if (n < 2) throw UsageError("Chebyshev interpolation needs at least two points");
    std::vector<Real> c(values);
    fft::dct1<Real>(c.data(), n);
    for (Real& v : c) v /= Real(n - 1);
    c.front() /= 2;
    c.back() /= 2;
    return ChebyshevSeries(a, b, std::move(c));
}

template <class Real>
ChebyshevSeries<Real> ChebyshevSeries<Real>::interpolate(const std::function<Real(Real)>& f, Real a, Real b,
                                                         std::size_t n) {
    const auto t = chebyshev_points<Real>(n, a, b);
    std::vector<Real> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = f(t[j]);
    return from_values(v, a, b);
}

template <class Real>
Real ChebyshevSeries<Real>::operator()(const Real& t) const {
    const Real s = (2 * t - a_ - b_) / (b_ - a_);
    Real b1 = 0, b2 = 0;
    for (std::size_t k = c_.size() - 1; k >= 1; --k) {
        const Real b0 = c_[k] + 2 * s * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c_[0] + s * b1 - b2;
}

template <class Real>
ChebyshevSeries<Real> ChebyshevSeries<Real>::derivative() const {
    const std::size_t m = c_.size() - 1;
    if (m == 0) return ChebyshevSeries(a_, b_, {Real(0)});
    std::vector<Real> d(m + 2, Real(0));
    for (std::size_t k = m; k >= 1; --k) d[k - 1] = d[k + 1] + 2 * Real(k) * c_[k];
    d[0] /= 2;
    d.resize(m);
    const Real scale = 2 / (b_ - a_);
    for (Real& v : d) v *= scale;
    return ChebyshevSeries(a_, b_, std::move(d));
}

template <class Real>
ChebyshevSeries<Real> ChebyshevSeries<Real>::antiderivative(const Real& at_a) const {
    const std::size_t m = c_.size() - 1;
    std::vector<Real> c(c_);
    c.resize(m + 3, Real(0));
    std::vector<Real> C(m + 2, Real(0));
    C[1] = c[0] - c[2] / 2;
    for (std::size_t k = 2; k <= m + 1; ++k) C[k] = (c[k - 1] - c[k + 1]) / (2 * Real(k));
    const Real scale = (b_ - a_) / 2;
    Real at_minus1 = 0;
    for (std::size_t k = 1; k < C.size(); ++k) {
        C[k] *= scale;
        at_minus1 += (k % 2 ? -C[k] : C[k]);
    }
    C[0] = at_a - at_minus1;
    return ChebyshevSeries(a_, b_, std::move(C));
}

template <class Real>
std::size_t ChebyshevSeries<Real>::degree(const Real& rel_tol) const {
    using std::abs;
    Real mx = 0;
    for (const Real& v : c_) mx = std::max(mx, Real(abs(v)));
    if (mx == 0) return 0;
    for (std::size_t k = c_.size(); k-- > 0;)
        if (abs(c_[k]) >= rel_tol * mx) return k;
    return 0;
}

template <class Real>
std::size_t ChebyshevSeries<Real>::tail_degree(const Real& rel_tol) const {
    using std::abs;
    Real mx = 0;
    for (const Real& v : c_) mx = std::max(mx, Real(abs(v)));
    Real tail = 0;
    for (std::size_t k = c_.size(); k-- > 0;) {
        if (tail + abs(c_[k]) > rel_tol * mx) return k;
        tail += abs(c_[k]);
    }
    return 0;
}

template <class Real>
ChebyshevSeries<Real> ChebyshevSeries<Real>::truncated(std::size_t degree) const {
    std::vector<Real> c(c_.begin(), c_.begin() + std::min(c_.size(), degree + 1));
    return ChebyshevSeries(a_, b_, std::move(c));
}

template <class Real>
ChebyshevSeries<Real> adaptive_chebyshev(const std::function<Real(Real)>& f, const Real& a, const Real& b,
                                         const Real& tail, std::size_t max_n) {
    using std::abs;
    for (std::size_t n = 33; n <= max_n; n = 2 * n - 1) {
        auto s = ChebyshevSeries<Real>::interpolate(f, a, b, n);
        const auto& c = s.coeffs();
        Real mx = 0, tl = 0;
        for (std::size_t k = 0; k < n; ++k) {
            mx = std::max(mx, Real(abs(c[k])));
            if (k >= n - n / 8) tl = std::max(tl, Real(abs(c[k])));
        }
        if (tl <= tail * mx) return s;
    }
    throw FitError("adaptive_chebyshev: tail not resolved with " + std::to_string(max_n) + " points");
}

#define PHASEFN_INSTANTIATE_CHEB(R)                                                                  \
    template class ChebyshevSeries<R>;                                                               \
    template std::vector<R> chebyshev_points(std::size_t, const R&, const R&);                       \
    template ChebyshevSeries<R> adaptive_chebyshev(const std::function<R(R)>&, const R&, const R&, \
                                                   const R&, std::size_t);

PHASEFN_INSTANTIATE_CHEB(double)
PHASEFN_INSTANTIATE_CHEB(Quad)

}  // namespace phasefn
