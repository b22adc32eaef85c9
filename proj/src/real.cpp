#include "phasefn/real.hpp"

#include <stdexcept>

#include "phasefn/errors.hpp"

namespace phasefn {

template <>
double parse_real<double>(const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("not a number: " + s);
    }
    if (pos != s.size()) throw UsageError("not a number: " + s);
    return v;
}

template <>
Quad parse_real<Quad>(const std::string& s) {
    try {
        return Quad(s);
    } catch (const std::exception&) {
        throw UsageError("not a number: " + s);
    }
}

template <>
const char* precision_name<double>() {
    return "double";
}
template <>
const char* precision_name<Quad>() {
    return "quad";
}

template <>
double PrecisionDefaults<double>::solve_tol() { return 1e-14; }
template <>
double PrecisionDefaults<double>::map_tol() { return 1e-13; }
template <>
double PrecisionDefaults<double>::cheb_tail() { return 1e-13; }
template <>
double PrecisionDefaults<double>::oracle_tol() { return 1e-14; }

template <>
Quad PrecisionDefaults<Quad>::solve_tol() { return Quad("1e-30"); }
template <>
Quad PrecisionDefaults<Quad>::map_tol() { return Quad("1e-31"); }
template <>
Quad PrecisionDefaults<Quad>::cheb_tail() { return Quad("1e-29"); }
template <>
Quad PrecisionDefaults<Quad>::oracle_tol() { return Quad("1e-30"); }

}  // namespace phasefn
