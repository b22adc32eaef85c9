#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "phasefn/errors.hpp"
#include "phasefn/real.hpp"

namespace phasefn {

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
template <class Real>
struct GaussLegendre {
    std::vector<Real> nodes, weights;
    explicit GaussLegendre(int n);

    template <class F>
    Real integrate(F&& f, const Real& a, const Real& b) const {
        const Real h = (b - a) / 2, m = (a + b) / 2;
        Real s = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(m + h * nodes[i]);
        return s * h;
    }
};

/// Shared 20-point rule.
template <class Real>
const GaussLegendre<Real>& gl20();

/// Adaptive bisection with a 20-point rule per panel. A panel is accepted when
/// |I(left) + I(right) - I(panel)| <= tol * scale, where scale is the first whole-interval
/// estimate (1 when that is tiny).
template <class Real, class F>
Real integrate_adaptive(F&& f, const Real& a, const Real& b, const Real& tol, int max_depth = 60) {
    using std::abs;
    const auto& rule = gl20<Real>();
    struct Panel {
        Real a, b, est;
        int depth;
    };
    const Real whole = rule.integrate(f, a, b);
    Real scale = abs(whole) > Real(1e-300) ? abs(whole) : Real(1);
    std::vector<Panel> stack{{a, b, whole, 0}};
    Real total = 0;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        const Real m = (p.a + p.b) / 2;
        const Real l = rule.integrate(f, p.a, m), r = rule.integrate(f, m, p.b);
        if (abs(l + r - p.est) <= tol * scale) {
            total += l + r;
        } else if (p.depth >= max_depth) {
            throw NumericalError("adaptive quadrature: maximum depth reached");
        } else {
            stack.push_back({m, p.b, r, p.depth + 1});
            stack.push_back({p.a, m, l, p.depth + 1});
        }
    }
    return total;
}

}  // namespace phasefn
