#include "phasefn/quadrature.hpp"

namespace phasefn {

template <class Real>
GaussLegendre<Real>::GaussLegendre(int n) : nodes(n), weights(n) {
    using std::abs;
    using std::cos;
    if (n < 1) throw UsageError("Gauss-Legendre rule needs n >= 1");
    for (int i = 0; i < (n + 1) / 2; ++i) {
        Real x = cos(pi<Real>() * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
        Real dp = 0;
        for (int it = 0; it < 100; ++it) {
            Real p0 = 1, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1;
            dp = Real(n) * (x * p1 - p0) / (x * x - 1);
            const Real dx = p1 / dp;
            x -= dx;
            if (abs(dx) <= 2 * eps<Real>()) break;
        }
        // recompute derivative at the converged node
        Real p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const Real p2 = (Real(2 * k - 1) * x * p1 - Real(k - 1) * p0) / Real(k);
            p0 = p1;
            p1 = p2;
        }
        dp = Real(n) * (x * p1 - p0) / (x * x - 1);
        const Real w = 2 / ((1 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0;
}

template <class Real>
const GaussLegendre<Real>& gl20() {
    static const GaussLegendre<Real> rule(20);
    return rule;
}

template struct GaussLegendre<double>;
template struct GaussLegendre<Quad>;
template const GaussLegendre<double>& gl20<double>();
template const GaussLegendre<Quad>& gl20<Quad>();

}  // namespace phasefn
