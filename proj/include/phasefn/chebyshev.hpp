#pragma once

// Chebyshev series f(t) = sum_k c_k T_k(s), s = (2t - a - b)/(b - a), on [a, b].

#include <cstddef>
#include <functional>
#include <vector>

#include "phasefn/real.hpp"

namespace phasefn {

template <class Real>
class ChebyshevSeries {
public:
    ChebyshevSeries() = default;
    ChebyshevSeries(Real a, Real b, std::vector<Real> coeffs);

    /// Interpolant through n >= 2 Chebyshev extreme points (DCT-I).
    static ChebyshevSeries interpolate(const std::function<Real(Real)>& f, Real a, Real b, std::size_t n);
    static ChebyshevSeries from_values(const std::vector<Real>& values, Real a, Real b);

    Real operator()(const Real& t) const;
    ChebyshevSeries derivative() const;
    /// Antiderivative taking the value `at_a` at t = a.
    ChebyshevSeries antiderivative(const Real& at_a = Real(0)) const;

    /// Largest k with |c_k| >= rel_tol * max|c| (0 for the zero series).
    std::size_t degree(const Real& rel_tol) const;
    /// Smallest k with sum_{j > k} |c_j| <= rel_tol * max|c| (0 for the zero series).
    std::size_t tail_degree(const Real& rel_tol) const;
    /// Drops coefficients beyond `degree`.
    ChebyshevSeries truncated(std::size_t degree) const;

    const std::vector<Real>& coeffs() const noexcept { return c_; }
    const Real& a() const noexcept { return a_; }
    const Real& b() const noexcept { return b_; }

private:
    Real a_ = -1, b_ = 1;
    std::vector<Real> c_;
};

/// Extreme points a..b mapped from cos(pi j / (n-1)), returned in descending t.
template <class Real>
std::vector<Real> chebyshev_points(std::size_t n, const Real& a, const Real& b);

/// Doubles n = 2^k + 1 (from 33) until the last eighth of the coefficients is below
/// tail * max|c|; throws NumericalError past max_n.
template <class Real>
ChebyshevSeries<Real> adaptive_chebyshev(const std::function<Real(Real)>& f, const Real& a, const Real& b,
                                         const Real& tail, std::size_t max_n = 16385);

}  // namespace phasefn
