#include "phasefn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "phasefn/errors.hpp"

namespace phasefn {

namespace {

// Dormand-Prince 8(5,3) coefficients (Hairer, Norsett, Wanner), stages 1..12.
template <class Real>
struct Tableau {
    Real c[13]{}, a[13][13]{}, b[13]{}, bhh1, bhh2, bhh3, er[13]{};

    Tableau() {
        auto P = [](const char* s) { return parse_real<Real>(s); };
        c[2] = P("0.526001519587677318785587544488E-01");
        c[3] = P("0.789002279381515978178381316732E-01");
        c[4] = P("0.118350341907227396726757197510E+00");
        c[5] = P("0.281649658092772603273242802490E+00");
        c[6] = Real(1) / 3;
        c[7] = P("0.25");
        c[8] = Real(4) / 13;
        c[9] = Real(127) / 195;
        c[10] = P("0.6");
        c[11] = Real(6) / 7;
        c[12] = 1;

        b[1] = P("5.42937341165687622380535766363E-2");
        b[6] = P("4.45031289275240888144113950566E0");
        b[7] = P("1.89151789931450038304281599044E0");
        b[8] = P("-5.8012039600105847814672114227E0");
        b[9] = P("3.1116436695781989440891606237E-1");
        b[10] = P("-1.52160949662516078556178806805E-1");
        b[11] = P("2.01365400804030348374776537501E-1");
        b[12] = P("4.47106157277725905176885569043E-2");

        a[2][1] = P("5.26001519587677318785587544488E-2");
        a[3][1] = P("1.97250569845378994544595329183E-2");
        a[3][2] = P("5.91751709536136983633785987549E-2");
        a[4][1] = P("2.95875854768068491816892993775E-2");
        a[4][3] = P("8.87627564304205475450678981324E-2");
        a[5][1] = P("2.41365134159266685502369798665E-1");
        a[5][3] = P("-8.84549479328286085344864962717E-1");
        a[5][4] = P("9.24834003261792003115737966543E-1");
        a[6][1] = Real(1) / 27;
        a[6][4] = P("1.70828608729473871279604482173E-1");
        a[6][5] = P("1.25467687566822425016691814123E-1");
        a[7][1] = P("3.7109375E-2");
        a[7][4] = P("1.70252211019544039314978060272E-1");
        a[7][5] = P("6.02165389804559606850219397283E-2");
        a[7][6] = P("-1.7578125E-2");
        a[8][1] = P("3.70920001185047927108779319836E-2");
        a[8][4] = P("1.70383925712239993810214054705E-1");
        a[8][5] = P("1.07262030446373284651809199168E-1");
        a[8][6] = P("-1.53194377486244017527936158236E-2");
        a[8][7] = P("8.27378916381402288758473766002E-3");
        a[9][1] = P("6.24110958716075717114429577812E-1");
        a[9][4] = P("-3.36089262944694129406857109825E0");
        a[9][5] = P("-8.68219346841726006818189891453E-1");
        a[9][6] = P("2.75920996994467083049415600797E1");
        a[9][7] = P("2.01540675504778934086186788979E1");
        a[9][8] = P("-4.34898841810699588477366255144E1");
        a[10][1] = P("4.77662536438264365890433908527E-1");
        a[10][4] = P("-2.48811461997166764192642586468E0");
        a[10][5] = P("-5.90290826836842996371446475743E-1");
        a[10][6] = P("2.12300514481811942347288949897E1");
        a[10][7] = P("1.52792336328824235832596922938E1");
        a[10][8] = P("-3.32882109689848629194453265587E1");
        a[10][9] = P("-2.03312017085086261358222928593E-2");
        a[11][1] = P("-9.3714243008598732571704021658E-1");
        a[11][4] = P("5.18637242884406370830023853209E0");
        a[11][5] = P("1.09143734899672957818500254654E0");
        a[11][6] = P("-8.14978701074692612513997267357E0");
        a[11][7] = P("-1.85200656599969598641566180701E1");
        a[11][8] = P("2.27394870993505042818970056734E1");
        a[11][9] = P("2.49360555267965238987089396762E0");
        a[11][10] = P("-3.0467644718982195003823669022E0");
        a[12][1] = P("2.27331014751653820792359768449E0");
        a[12][4] = P("-1.05344954667372501984066689879E1");
        a[12][5] = P("-2.00087205822486249909675718444E0");
        a[12][6] = P("-1.79589318631187989172765950534E1");
        a[12][7] = P("2.79488845294199600508499808837E1");
        a[12][8] = P("-2.85899827713502369474065508674E0");
        a[12][9] = P("-8.87285693353062954433549289258E0");
        a[12][10] = P("1.23605671757943030647266201528E1");
        a[12][11] = P("6.43392746015763530355970484046E-1");

        bhh1 = P("0.244094488188976377952755905512E+00");
        bhh2 = P("0.733846688281611857341361741547E+00");
        bhh3 = P("0.220588235294117647058823529412E-01");
        er[1] = P("0.1312004499419488073250102996E-01");
        er[6] = P("-0.1225156446376204440720569753E+01");
        er[7] = P("-0.4957589496572501915214079952E+00");
        er[8] = P("0.1664377182454986536961530415E+01");
        er[9] = P("-0.3503288487499736816886487290E+00");
        er[10] = P("0.3341791187130174790297318841E+00");
        er[11] = P("0.8192320648511571246570742613E-01");
        er[12] = P("-0.2235530786388629525884427845E-01");
    }
};

template <class Real>
const Tableau<Real>& tableau() {
    static const Tableau<Real> t;
    return t;
}

using std::array;

template <class Real, std::size_t D>
struct Step {
    array<Real, D> y;
    Real err;  // scaled error norm; accept when <= 1
};

// One DOP853 step of size h from (t, y) with k1 = f(t, y).
template <class Real, std::size_t D>
Step<Real, D> step(const OdeRhs<Real, D>& f, const Real& t, const array<Real, D>& y, const array<Real, D>& k1,
                   const Real& h, const Real& tol, bool estimate) {
    using std::abs;
    using std::max;
    using std::sqrt;
    const auto& T = tableau<Real>();
    array<array<Real, D>, 13> k{};
    k[1] = k1;
    for (int s = 2; s <= 12; ++s) {
        array<Real, D> w = y;
        for (int j = 1; j < s; ++j) {
            if (T.a[s][j] == 0) continue;
            const Real ha = h * T.a[s][j];
            for (std::size_t i = 0; i < D; ++i) w[i] += ha * k[j][i];
        }
        k[s] = f(t + T.c[s] * h, w);
    }
    array<Real, D> incr{}, ynew{};
    for (std::size_t i = 0; i < D; ++i) {
        Real s = 0;
        for (int j : {1, 6, 7, 8, 9, 10, 11, 12}) s += T.b[j] * k[j][i];
        incr[i] = s;
        ynew[i] = y[i] + h * s;
    }
    if (!estimate) return {ynew, Real(0)};
    Real err = 0, err2 = 0;
    for (std::size_t i = 0; i < D; ++i) {
        const Real sk = tol + tol * max(abs(y[i]), abs(ynew[i]));
        const Real e3 = (incr[i] - T.bhh1 * k[1][i] - T.bhh2 * k[9][i] - T.bhh3 * k[12][i]) / sk;
        Real e5 = 0;
        for (int j : {1, 6, 7, 8, 9, 10, 11, 12}) e5 += T.er[j] * k[j][i];
        e5 /= sk;
        err += e5 * e5;
        err2 += e3 * e3;
    }
    const Real deno = err + err2 / 100;
    const Real n = Real(static_cast<int>(D));
    const Real e = abs(h) * err * sqrt(1 / (deno <= 0 ? n : deno * n));
    return {ynew, e};
}

}  // namespace

template <class Real, std::size_t D>
std::array<Real, D> OracleSolution<Real, D>::operator()(const Real& t) const {
    if (!(t >= t_.front() && t <= t_.back()))
        throw DomainError("oracle evaluated at t = " + std::to_string(to_double(t)) + " outside its interval");
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const std::size_t n = static_cast<std::size_t>(it - t_.begin()) - 1;
    if (t == t_[n]) return y_[n];
    return step<Real, D>(f_, t_[n], y_[n], f_(t_[n], y_[n]), t - t_[n], Real(0), false).y;
}

template <class Real, std::size_t D>
OracleSolution<Real, D> dop853(const OdeRhs<Real, D>& f, const Real& t0, const Real& t1, const std::array<Real, D>& y0,
                               const Real& tol) {
    using std::abs;
    using std::isfinite;
    using std::max;
    using std::min;
    using std::pow;
    if (!(t1 > t0)) throw UsageError("dop853: needs t1 > t0");
    if (!(tol >= 12 * eps<Real>())) throw UsageError("dop853: tolerance below 12 eps");
    constexpr std::size_t kMaxSteps = 20'000'000;
    std::vector<Real> ts{t0};
    std::vector<array<Real, D>> ys{y0};
    std::size_t rejected = 0;

    Real t = t0;
    array<Real, D> y = y0, k1 = f(t, y);
    Real h = (t1 - t0) / 100;
    {
        Real d = 0, ymax = 0;
        for (std::size_t i = 0; i < D; ++i) {
            d = max(d, Real(abs(k1[i])));
            ymax = max(ymax, Real(abs(y[i])));
        }
        d /= tol + tol * ymax;
        if (d > 0) h = min(h, Real(pow(Real(1) / d, Real(1) / 8)));
    }
    const Real safe = Real(0.9), facc1 = Real(1) / Real(0.333), facc2 = Real(1) / 6, expo = Real(1) / 8;
    bool reject = false, last = false;
    while (!last) {
        if (t + Real(1.01) * h >= t1) {
            h = t1 - t;
            last = true;
        }
        if (h <= 16 * eps<Real>() * max(Real(1), abs(t)))
            throw StiffnessError("dop853: step size underflow at t = " + std::to_string(to_double(t)));
        const Step<Real, D> s = step<Real, D>(f, t, y, k1, h, tol, true);
        if (!isfinite(s.err)) throw NumericalError("dop853: non-finite step");
        const Real fac11 = pow(max(s.err, Real(1e-300)), expo);
        if (s.err <= 1) {
            t = last ? t1 : t + h;
            y = s.y;
            k1 = f(t, y);
            ts.push_back(t);
            ys.push_back(y);
            if (ts.size() > kMaxSteps) throw StiffnessError("dop853: step budget exhausted");
            Real hnew = h / max(facc2, min(facc1, fac11 / safe));
            if (reject) hnew = min(hnew, h);
            reject = false;
            h = hnew;
        } else {
            h = h / min(facc1, fac11 / safe);
            reject = true;
            last = false;
            ++rejected;
        }
    }
    return OracleSolution<Real, D>(f, std::move(ts), std::move(ys), rejected, tol);
}

namespace {

template <class Real, std::size_t D>
OracleSolution<Real, D> run_oracle(const OdeRhs<Real, D>& f, const Real& a, const Real& b, const array<Real, D>& y0,
                                   const Real& tol, OracleOptions opts) {
    using std::abs;
    using std::max;
    if (!(tol >= 40 * eps<Real>()))
        throw UsageError("ode_oracle: tol must be at least 40 eps (" + std::to_string(to_double(40 * eps<Real>())) +
                         ")");
    const Real floor = 12 * eps<Real>();
    const Real local = max(floor, Real(tol * Real(kOracleLocalFactor)));
    OracleSolution<Real, D> sol = dop853<Real, D>(f, a, b, y0, local);
    if (!opts.self_check) return sol;
    OracleSolution<Real, D> fine = dop853<Real, D>(f, a, b, y0, max(floor, local / 32));
    Real diff = 0;
    for (int i = 0; i <= 256; ++i) {
        const Real t = i == 256 ? b : a + (b - a) * i / 256;
        const auto yc = sol(t), yf = fine(t);
        for (std::size_t c = 0; c < D; c += 2) diff = max(diff, Real(abs(yc[c] - yf[c])));
    }
    fine.set_achieved(diff);
    return fine;
}

}  // namespace

template <class Real>
OracleSolution<Real, 2> ode_oracle(const RealFn<Real>& q, const Real& lambda, const Real& a, const Real& b,
                                   const Real& y0, const Real& dy0, const Real& tol, OracleOptions opts) {
    const Real l2 = lambda * lambda;
    const OdeRhs<Real, 2> f = [q, l2](const Real& t, const array<Real, 2>& y) {
        return array<Real, 2>{y[1], -l2 * q(t) * y[0]};
    };
    return run_oracle<Real, 2>(f, a, b, {y0, dy0}, tol, opts);
}

template <class Real>
OracleSolution<Real, 2> ode_oracle(const CoefficientProblem<Real>& prob, const Real& y0, const Real& dy0,
                                   const Real& tol, OracleOptions opts) {
    return ode_oracle(prob.coefficient.q, prob.lambda, prob.coefficient.interval_a, prob.coefficient.interval_b,
                      y0, dy0, tol, opts);
}

template <class Real>
OracleSolution<Real, 4> ode_oracle_pair(const RealFn<Real>& q, const Real& lambda, const Real& a, const Real& b,
                                        const std::array<Real, 4>& init, const Real& tol, OracleOptions opts) {
    const Real l2 = lambda * lambda;
    const OdeRhs<Real, 4> f = [q, l2](const Real& t, const array<Real, 4>& y) {
        const Real k = -l2 * q(t);
        return array<Real, 4>{y[1], k * y[0], y[3], k * y[2]};
    };
    return run_oracle<Real, 4>(f, a, b, init, tol, opts);
}

template <class Real>
Real LiouvilleGreen<Real>::phi(const Real& x) const {
    using std::sqrt;
    const Real t = prob->map.t_of_x(x);
    return sqrt(sqrt(prob->coefficient.q(t))) * (*y)(t)[0];
}

template <class Real>
std::pair<Real, Real> LiouvilleGreen<Real>::initial_values() const {
    using std::pow;
    const Real a = prob->coefficient.interval_a;
    const auto j = (*prob->extended)(a);
    const auto ya = (*y)(a);
    return {pow(j.q, Real(1) / 4) * ya[0], j.dq * pow(j.q, Real(-5) / 4) * ya[0] / 4 + pow(j.q, Real(-1) / 4) * ya[1]};
}

template <class Real>
Real LiouvilleGreen<Real>::y_back(const Real& t) const {
    using std::sqrt;
    return phi(prob->map.x_of_t(t)) / sqrt(sqrt(prob->coefficient.q(t)));
}

template <class Real>
Real LiouvilleGreen<Real>::residual(const std::vector<Real>& x_nodes, const Real& h) const {
    using std::abs;
    using std::max;
    const Real l2 = prob->lambda * prob->lambda;
    const Real a = prob->coefficient.interval_a;
    Real worst = 0, scale = 0;
    for (int i = 0; i <= 400; ++i) scale = max(scale, Real(abs(phi(prob->map.x_b() * i / 400))));
    for (const Real& x : x_nodes) {
        const Real f0 = phi(x);
        const Real d2 = (-phi(x + 2 * h) + 16 * phi(x + h) - 30 * f0 + 16 * phi(x - h) - phi(x - 2 * h)) / (12 * h * h);
        const Real t = prob->map.t_of_x(x);
        const Real p = p_from_jet((*prob->extended)(t < a ? a : t));
        worst = max(worst, Real(abs(d2 + l2 * f0 + p * f0 / 4)));
    }
    return scale > 0 ? worst / scale : worst;
}

template <class Real>
LiouvilleGreen<Real> liouville_green(std::shared_ptr<const CoefficientProblem<Real>> prob,
                                     std::shared_ptr<const OracleSolution<Real, 2>> y) {
    return {std::move(prob), std::move(y)};
}

template <class Real>
std::pair<Real, Real> basis_error(const PhaseFunction<Real>& phase, const RealFn<Real>& q, const Real& tol) {
    using std::abs;
    using std::max;
    const Real a = phase.a(), b = phase.b();
    const BasisJet<Real> j = eval_basis_jet(phase, a);
    const auto o = ode_oracle_pair(q, phase.lambda(), a, b, {j.u, j.du, j.v, j.dv}, tol);
    Real eu = 0, ev = 0;
    for (int i = 0; i < 400; ++i) {
        const Real t = i == 399 ? b : a + (b - a) * i / 399;
        const auto [u, v] = eval_basis(phase, t);
        const auto y = o(t);
        eu = max(eu, Real(abs(u - y[0])));
        ev = max(ev, Real(abs(v - y[2])));
    }
    return {eu, ev};
}

template <class Real>
std::pair<Real, Real> basis_error(const PhaseFunction<Real>& phase, const CoefficientProblem<Real>& prob,
                                  const Real& tol) {
    return basis_error(phase, prob.coefficient.q, tol);
}

#define PHASEFN_INSTANTIATE_ORACLE(R)                                                                        \
    template class OracleSolution<R, 2>;                                                                     \
    template class OracleSolution<R, 4>;                                                                     \
    template OracleSolution<R, 2> dop853(const OdeRhs<R, 2>&, const R&, const R&, const std::array<R, 2>&,   \
                                         const R&);                                                          \
    template OracleSolution<R, 4> dop853(const OdeRhs<R, 4>&, const R&, const R&, const std::array<R, 4>&,   \
                                         const R&);                                                          \
    template OracleSolution<R, 2> ode_oracle(const RealFn<R>&, const R&, const R&, const R&, const R&,       \
                                             const R&, const R&, OracleOptions);                             \
    template OracleSolution<R, 2> ode_oracle(const CoefficientProblem<R>&, const R&, const R&, const R&,     \
                                             OracleOptions);                                                 \
    template OracleSolution<R, 4> ode_oracle_pair(const RealFn<R>&, const R&, const R&, const R&,            \
                                                  const std::array<R, 4>&, const R&, OracleOptions);         \
    template struct LiouvilleGreen<R>;                                                                       \
    template LiouvilleGreen<R> liouville_green(std::shared_ptr<const CoefficientProblem<R>>,                 \
                                               std::shared_ptr<const OracleSolution<R, 2>>);                 \
    template std::pair<R, R> basis_error(const PhaseFunction<R>&, const RealFn<R>&, const R&);               \
    template std::pair<R, R> basis_error(const PhaseFunction<R>&, const CoefficientProblem<R>&, const R&);

PHASEFN_INSTANTIATE_ORACLE(double)
PHASEFN_INSTANTIATE_ORACLE(Quad)

}  // namespace phasefn
