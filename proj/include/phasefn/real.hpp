#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/float128.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>

namespace phasefn {

/// 113-bit IEEE binary128, used where double rounding hides the quantity being measured.
using Quad = boost::multiprecision::float128;

template <class Real>
using Complex = std::complex<Real>;

template <class Real>
inline constexpr bool is_supported_real_v = std::is_same_v<Real, double> || std::is_same_v<Real, Quad>;

template <class Real>
inline Real pi() {
    return boost::math::constants::pi<Real>();
}

template <class Real>
inline Real eps() {
    return std::numeric_limits<Real>::epsilon();
}

/// Parses a decimal literal at the full precision of Real.
template <class Real>
Real parse_real(const std::string& s);

template <class Real>
inline double to_double(const Real& x) {
    return static_cast<double>(x);
}

template <class Real>
const char* precision_name();

/// Tolerances that scale with the working precision.
template <class Real>
struct PrecisionDefaults {
    static Real solve_tol();   // fixed-point relative L1 increment
    static Real map_tol();     // x(t) quadrature and t(x) Newton
    static Real cheb_tail();   // Chebyshev tail cutoff for r and exp(r/2)
    static Real oracle_tol();  // DOP853 local tolerance
};

}  // namespace phasefn
