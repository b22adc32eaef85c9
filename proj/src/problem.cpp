#include "phasefn/problem.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "phasefn/errors.hpp"
#include "phasefn/quadrature.hpp"

namespace phasefn {

namespace {

// erf-step steepness: s = erfc(-6 (t - m) / w) / 2 reaches 1 - 2e-37 at the ends of its 3w window.
constexpr int kSteep = 6;

template <class Real>
Real fd_first(const RealFn<Real>& f, const Real& t, const Real& h) {
    const Real d1 = f(t + h) - f(t - h), d2 = f(t + 2 * h) - f(t - 2 * h);
    const Real d3 = f(t + 3 * h) - f(t - 3 * h), d4 = f(t + 4 * h) - f(t - 4 * h);
    return (Real(4) / 5 * d1 - Real(1) / 5 * d2 + Real(4) / 105 * d3 - Real(1) / 280 * d4) / h;
}

template <class Real>
Real fd_second(const RealFn<Real>& f, const Real& t, const Real& h) {
    const Real s1 = f(t + h) + f(t - h), s2 = f(t + 2 * h) + f(t - 2 * h);
    const Real s3 = f(t + 3 * h) + f(t - 3 * h), s4 = f(t + 4 * h) + f(t - 4 * h);
    return (Real(-205) / 72 * f(t) + Real(8) / 5 * s1 - Real(1) / 5 * s2 + Real(8) / 315 * s3 - Real(1) / 560 * s4) /
           (h * h);
}

template <class Real>
Real boundary_tol() {
    return std::min(Real(1e-14), 1000 * eps<Real>());
}

}  // namespace

template <class Real>
ExtendedCoefficient<Real>::ExtendedCoefficient(Coefficient<Real> c) : c_(std::move(c)) {
    using std::isfinite;
    if (!c_.q) throw UsageError("coefficient has no q");
    if (!(c_.interval_a < c_.interval_b)) throw UsageError("coefficient interval needs a < b");
    w_ = c_.extension_width > 0 ? c_.extension_width : (c_.interval_b - c_.interval_a) / 2;
    const Real h = (c_.interval_b - c_.interval_a) / 1000;
    if (!c_.dq) {
        RealFn<Real> q = c_.q;
        c_.dq = [q, h](Real t) { return fd_first(q, t, h); };
    }
    if (!c_.d2q) {
        RealFn<Real> q = c_.q;
        c_.d2q = [q, h](Real t) { return fd_second(q, t, h); };
    }
    qa_ = c_.q(c_.interval_a);
    qb_ = c_.q(c_.interval_b);
    if (!(qa_ > 0) || !(qb_ > 0) || !isfinite(qa_) || !isfinite(qb_))
        throw DomainError("q must be positive and finite at the interval ends");
}

template <class Real>
QJet<Real> ExtendedCoefficient<Real>::base_jet(const Real& t) const {
    return {c_.q(t), c_.dq(t), c_.d2q(t)};
}

template <class Real>
QJet<Real> ExtendedCoefficient<Real>::operator()(const Real& t) const {
    using std::erfc;
    using std::exp;
    using std::isfinite;
    using std::sqrt;
    QJet<Real> j;
    if (t <= lo()) {
        j = {qa_, 0, 0};
    } else if (t >= hi()) {
        j = {qb_, 0, 0};
    } else if (t >= a() && t <= b()) {
        j = base_jet(t);
    } else {
        const bool right = t > b();
        const Real k = Real(kSteep) / w_;
        const Real z = right ? k * (t - b() - Real(1.5) * w_) : k * (t - a() + Real(1.5) * w_);
        const Real g = k / sqrt(pi<Real>()) * exp(-z * z);
        // s: weight of the constant end value
        const Real s = right ? erfc(-z) / 2 : erfc(z) / 2;
        const Real s1 = right ? g : -g;
        const Real s2 = -2 * z * k * s1;
        const Real qc = right ? qb_ : qa_;
        const QJet<Real> u = base_jet(t);
        j.q = u.q + s * (qc - u.q);
        j.dq = u.dq + s1 * (qc - u.q) - s * u.dq;
        j.d2q = u.d2q + s2 * (qc - u.q) - 2 * s1 * u.dq - s * u.d2q;
    }
    if (!(j.q > 0) || !isfinite(j.q))
        throw DomainError("q is not positive at t = " + std::to_string(to_double(t)));
    return j;
}

template <class Real>
Real ExtendedCoefficient<Real>::q(const Real& t) const {
    using std::isfinite;
    Real v;
    if (t <= lo()) v = qa_;
    else if (t >= hi()) v = qb_;
    else if (t >= a() && t <= b()) v = c_.q(t);
    else v = (*this)(t).q;
    if (!(v > 0) || !isfinite(v)) throw DomainError("q is not positive at t = " + std::to_string(to_double(t)));
    return v;
}

template <class Real>
Real p_from_jet(const QJet<Real>& j) {
    const Real r1 = j.dq / j.q, r2 = j.d2q / j.q;
    return (Real(5) / 4 * r1 * r1 - r2) / j.q;
}

// ---------------------------------------------------------------- map

template <class Real>
Real CoordinateMap<Real>::panel_x(std::size_t i, const Real& t) const {
    using std::sqrt;
    if (t == t_[i]) return x_[i];
    const auto& c = *c_;
    return x_[i] + gl20<Real>().integrate([&c](const Real& u) { return sqrt(c.q(u)); }, t_[i], t);
}

template <class Real>
Real CoordinateMap<Real>::x_of_t(const Real& t) const {
    if (t <= t_.front()) return x_.front() + (t - t_.front()) * slope_lo_;
    if (t >= t_.back()) return x_.back() + (t - t_.back()) * slope_hi_;
    const std::size_t i = std::upper_bound(t_.begin(), t_.end(), t) - t_.begin() - 1;
    return panel_x(i, t);
}

template <class Real>
Real CoordinateMap<Real>::t_of_x(const Real& x) const {
    using std::abs;
    using std::sqrt;
    if (x <= x_.front()) return t_.front() + (x - x_.front()) / slope_lo_;
    if (x >= x_.back()) return t_.back() + (x - x_.back()) / slope_hi_;
    const std::size_t i = std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1;
    Real lo = t_[i], hi = t_[i + 1];
    if (x == x_[i]) return lo;
    Real t = lo + (hi - lo) * (x - x_[i]) / (x_[i + 1] - x_[i]);
    for (int it = 0; it < 100; ++it) {
        const Real f = panel_x(i, t) - x;
        if (f == 0) return t;
        if (f > 0) hi = t;
        else lo = t;
        Real tn = t - f / sqrt(c_->q(t));
        if (!(tn > lo && tn < hi)) tn = (lo + hi) / 2;
        const Real step = abs(tn - t);
        t = tn;
        if (step <= tol_ * std::max(Real(1), abs(t)) || hi - lo <= 4 * eps<Real>() * std::max(Real(1), abs(t))) {
            // one more Newton step squares the error
            const Real f2 = panel_x(i, t) - x;
            const Real t2 = t - f2 / sqrt(c_->q(t));
            return (t2 >= lo && t2 <= hi) ? t2 : t;
        }
    }
    throw NumericalError("t_of_x: Newton did not converge in 100 steps");
}

template <class Real>
CoordinateMap<Real> build_map(std::shared_ptr<const ExtendedCoefficient<Real>> c, const Real& tol) {
    using std::abs;
    using std::sqrt;
    if (!(tol > 0)) throw UsageError("build_map: tolerance must be positive");
    CoordinateMap<Real> m;
    m.c_ = c;
    m.tol_ = tol;
    const auto& rule = gl20<Real>();
    auto f = [&c](const Real& u) { return sqrt(c->q(u)); };

    std::vector<Real> breaks;
    auto add_uniform = [&](const Real& lo, const Real& hi, int n) {
        for (int k = 0; k < n; ++k) breaks.push_back(lo + (hi - lo) * Real(k) / Real(n));
    };
    add_uniform(c->lo(), c->a(), 6);
    add_uniform(c->a(), c->b(), 16);
    add_uniform(c->b(), c->hi(), 6);
    breaks.push_back(c->hi());

    std::vector<Real> t{breaks.front()}, x{Real(0)};
    std::size_t a_index = 6;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (k == 6) a_index = t.size() - 1;
        struct Panel {
            Real lo, hi, est;
            int depth;
        };
        std::vector<Panel> stack{{breaks[k], breaks[k + 1], rule.integrate(f, breaks[k], breaks[k + 1]), 0}};
        while (!stack.empty()) {
            Panel p = stack.back();
            stack.pop_back();
            const Real mid = (p.lo + p.hi) / 2;
            const Real l = rule.integrate(f, p.lo, mid), r = rule.integrate(f, mid, p.hi);
            if (abs(l + r - p.est) <= tol * std::max(Real(1), abs(p.est))) {
                t.push_back(p.hi);
                x.push_back(x.back() + p.est);
            } else if (p.depth > 60) {
                throw NumericalError("build_map: panel refinement failed");
            } else {
                stack.push_back({mid, p.hi, r, p.depth + 1});
                stack.push_back({p.lo, mid, l, p.depth + 1});
            }
        }
    }
    const Real xa = x[a_index];
    for (Real& v : x) v -= xa;
    m.t_ = std::move(t);
    m.x_ = std::move(x);
    m.slope_lo_ = sqrt(c->q(m.t_.front()));
    m.slope_hi_ = sqrt(c->q(m.t_.back()));
    m.x_b_ = m.x_of_t(c->b());
    return m;
}

template <class Real>
CoordinateMap<Real> build_map(const Coefficient<Real>& c, const Real& tol) {
    return build_map<Real>(std::make_shared<const ExtendedCoefficient<Real>>(c), tol);
}

template <class Real>
RealSample<Real> schwarzian_p(const ExtendedCoefficient<Real>& c, const CoordinateMap<Real>& map,
                              const SpectralGrid<Real>& grid) {
    using std::abs;
    RealSample<Real> p(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) p.values[j] = p_from_jet(c(map.t_of_x(grid.x(j))));
    const Real m = linf_norm(p);
    const Real edge = std::max(abs(p.values.front()), abs(p.values.back()));
    if (m > 0 && edge > boundary_tol<Real>() * m) {
        const Real need = Real(1.1) * std::max(abs(map.x_of_t(c.lo())), abs(map.x_of_t(c.hi())));
        throw ConfigurationError("grid half-width L = " + std::to_string(to_double(grid.half_width())) +
                                 " too small: p at the boundary is " + std::to_string(to_double(edge / m)) +
                                 " of max|p|; use L >= " + std::to_string(to_double(need)));
    }
    return p;
}

// ---------------------------------------------------------------- fit

template <class Real>
DecayFit<Real> fit_decay(const SpectralSample<Real>& p_hat, const Real& floor) {
    using std::abs;
    using std::exp;
    using std::log;
    DecayFit<Real> fit;
    fit.floor = floor;
    const auto& g = p_hat.grid;
    Real mx = 0;
    for (const auto& v : p_hat.values) mx = std::max(mx, Real(abs(v)));
    if (mx == 0) {
        fit.degenerate = true;
        fit.mu = std::numeric_limits<Real>::infinity();
        return fit;
    }
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Real a = abs(p_hat.values[k]);
        if (!(a > Real(1e-12) * mx)) continue;
        const Real xv = abs(g.xi(k)), yv = log(a);
        sx += xv;
        sy += yv;
        sxx += xv * xv;
        sxy += xv * yv;
        ++n;
    }
    if (n < 8) throw FitError("fit_decay: fewer than 8 usable nodes (" + std::to_string(n) + ")");
    const Real den = Real(n) * sxx - sx * sx;
    if (!(den > 0)) throw FitError("fit_decay: degenerate abscissae");
    const Real slope = (Real(n) * sxy - sx * sy) / den;
    if (!(slope < 0)) throw FitError("fit_decay: p^ does not decay");
    fit.mu = -slope;
    fit.fit_nodes = n;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Real a = abs(p_hat.values[k]);
        if (a > floor) fit.gamma = std::max(fit.gamma, Real(a * exp(fit.mu * abs(g.xi(k)))));
    }
    return fit;
}

// ---------------------------------------------------------------- problem

template <class Real>
CoefficientProblem<Real> make_problem(const Coefficient<Real>& c, const Real& lambda, const GridOptions<Real>& opts) {
    using std::abs;
    using std::ceil;
    using std::sqrt;
    if (!(lambda > 0)) throw UsageError("lambda must be positive");
    auto ext = std::make_shared<const ExtendedCoefficient<Real>>(c);
    const Real tol = opts.map_tol > 0 ? opts.map_tol : PrecisionDefaults<Real>::map_tol();
    CoordinateMap<Real> map = build_map<Real>(ext, tol);

    Real L = opts.L;
    if (!(L > 0)) {
        const Real span = std::max(abs(map.x_of_t(ext->lo())), abs(map.x_of_t(ext->hi())));
        L = ceil(Real(1.1) * span);
    }
    const Real need_xi = 2 * sqrt(Real(2)) * lambda;
    std::size_t N = opts.N;
    const bool auto_n = N == 0;
    if (auto_n) {
        N = 16;
        while (pi<Real>() * Real(N) / (2 * L) < need_xi) N *= 2;
    }
    constexpr std::size_t kMaxN = std::size_t(1) << 17;
    for (;;) {
        SpectralGrid<Real> grid(L, N);
        RealSample<Real> p = schwarzian_p(*ext, map, grid);
        SpectralSample<Real> P = forward(p);
        const Real floor = forward_rounding_floor(p);
        if (auto_n) {
            Real mx = 0, tail = 0;
            for (std::size_t k = 0; k < N; ++k) {
                const Real a = abs(P.values[k]);
                mx = std::max(mx, a);
                if (abs(grid.xi(k)) >= grid.xi_max() / 2) tail = std::max(tail, a);
            }
            if (tail > std::max(100 * eps<Real>() * mx, 4 * floor)) {
                if (N >= kMaxN) throw ConfigurationError("p^ tail not resolved with N <= 2^17");
                N *= 2;
                continue;
            }
        }
        DecayFit<Real> fit = fit_decay(P, floor);
        return CoefficientProblem<Real>{c,        ext,      lambda,  std::move(map),  grid, std::move(p),
                                        std::move(P), fit.gamma, fit.mu, fit.degenerate, floor};
    }
}

template <class Real>
HypothesisReport<Real> check_hypotheses(const CoefficientProblem<Real>& prob) {
    HypothesisReport<Real> h{};
    h.lambda = prob.lambda;
    h.gamma = prob.gamma_fit;
    h.mu = prob.mu_fit;
    if (prob.degenerate) {
        h.lambda_threshold = 0;
    } else {
        h.lambda_threshold = 2 * std::max(Real(1) / prob.mu_fit, prob.gamma_fit);
    }
    h.lambda_ok = prob.lambda > h.lambda_threshold;
    h.w_l1 = l1_norm(prob.p_hat);
    h.w_l1_limit = pi<Real>() / 2 * prob.lambda * prob.lambda;
    h.w_ok = h.w_l1 <= h.w_l1_limit;
    return h;
}

// ---------------------------------------------------------------- tables

template <class Real>
RealFn<Real> floater_hormann(std::vector<Real> t, std::vector<Real> v, int d) {
    using std::abs;
    const int n = static_cast<int>(t.size());
    if (n < 2 || v.size() != t.size()) throw UsageError("sample table needs at least two (t, q) pairs");
    for (int k = 1; k < n; ++k)
        if (!(t[k] > t[k - 1])) throw UsageError("sample table abscissae must be strictly increasing");
    d = std::min(d, n - 1);
    std::vector<Real> w(n, Real(0));
    for (int k = 0; k < n; ++k) {
        Real s = 0;
        for (int i = std::max(0, k - d); i <= std::min(k, n - 1 - d); ++i) {
            Real prod = 1;
            for (int j = i; j <= i + d; ++j)
                if (j != k) prod /= abs(t[k] - t[j]);
            s += prod;
        }
        w[k] = ((k - d) % 2 == 0 ? s : -s);
    }
    return [t = std::move(t), v = std::move(v), w = std::move(w)](Real x) {
        Real num = 0, den = 0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (x == t[k]) return v[k];
            const Real c = w[k] / (x - t[k]);
            num += c * v[k];
            den += c;
        }
        return num / den;
    };
}

namespace {

std::string number_text(const nlohmann::json& j, const char* what) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) return j.dump();
    throw UsageError(std::string("problem file: '") + what + "' must be a number or numeric string");
}

}  // namespace

ProblemFile parse_problem_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("problem file: ") + e.what());
    }
    ProblemFile pf;
    if (!j.contains("q")) throw UsageError("problem file: missing 'q'");
    if (!j.contains("a") || !j.contains("b")) throw UsageError("problem file: missing 'a' or 'b'");
    const auto& q = j["q"];
    if (q.is_string()) {
        pf.q_expr = q.get<std::string>();
    } else if (q.is_object() && q.contains("t") && q.contains("q")) {
        for (const auto& v : q["t"]) pf.table_t.push_back(number_text(v, "q.t"));
        for (const auto& v : q["q"]) pf.table_q.push_back(number_text(v, "q.q"));
        if (pf.table_t.size() != pf.table_q.size()) throw UsageError("problem file: table lengths differ");
    } else {
        throw UsageError("problem file: 'q' must be an expression string or {\"t\": [...], \"q\": [...]}");
    }
    if (j.contains("dq")) pf.dq_expr = j["dq"].get<std::string>();
    if (j.contains("d2q")) pf.d2q_expr = j["d2q"].get<std::string>();
    pf.a = number_text(j["a"], "a");
    pf.b = number_text(j["b"], "b");
    if (j.contains("lambda")) pf.lambda = number_text(j["lambda"], "lambda");
    if (j.contains("extension_width")) pf.extension_width = number_text(j["extension_width"], "extension_width");
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("L")) pf.grid_L = number_text(g["L"], "grid.L");
        if (g.contains("N")) pf.grid_N = g["N"].get<std::size_t>();
    }
    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open problem file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_json(ss.str());
}

template <class Real>
Coefficient<Real> make_coefficient(const ProblemFile& pf) {
    Coefficient<Real> c;
    c.interval_a = parse_real<Real>(pf.a);
    c.interval_b = parse_real<Real>(pf.b);
    if (pf.extension_width) c.extension_width = parse_real<Real>(*pf.extension_width);
    if (pf.q_expr) {
        auto q = std::make_shared<Expression>(Expression::parse(*pf.q_expr));
        c.q = [q](Real t) { return q->eval(t); };
        if (pf.dq_expr) {
            auto e = std::make_shared<Expression>(Expression::parse(*pf.dq_expr));
            c.dq = [e](Real t) { return e->eval(t); };
        } else {
            c.dq = [q](Real t) { return q->eval_jet(t).d; };
        }
        if (pf.d2q_expr) {
            auto e = std::make_shared<Expression>(Expression::parse(*pf.d2q_expr));
            c.d2q = [e](Real t) { return e->eval(t); };
        } else {
            c.d2q = [q](Real t) { return q->eval_jet(t).dd; };
        }
    } else {
        std::vector<Real> t, v;
        for (const auto& s : pf.table_t) t.push_back(parse_real<Real>(s));
        for (const auto& s : pf.table_q) v.push_back(parse_real<Real>(s));
        const Real w = c.extension_width > 0 ? c.extension_width : (c.interval_b - c.interval_a) / 2;
        if (t.front() > c.interval_a - 3 * w || t.back() < c.interval_b + 3 * w)
            throw ConfigurationError("sample table must span [a - 3w, b + 3w]");
        c.q = floater_hormann<Real>(std::move(t), std::move(v));
    }
    return c;
}

#define PHASEFN_INSTANTIATE_PROBLEM(R)                                                                         \
    template class ExtendedCoefficient<R>;                                                                     \
    template R p_from_jet(const QJet<R>&);                                                                     \
    template class CoordinateMap<R>;                                                                           \
    template CoordinateMap<R> build_map(std::shared_ptr<const ExtendedCoefficient<R>>, const R&);              \
    template CoordinateMap<R> build_map(const Coefficient<R>&, const R&);                                      \
    template RealSample<R> schwarzian_p(const ExtendedCoefficient<R>&, const CoordinateMap<R>&,                \
                                        const SpectralGrid<R>&);                                               \
    template DecayFit<R> fit_decay(const SpectralSample<R>&, const R&);                                        \
    template CoefficientProblem<R> make_problem(const Coefficient<R>&, const R&, const GridOptions<R>&);       \
    template HypothesisReport<R> check_hypotheses(const CoefficientProblem<R>&);                               \
    template RealFn<R> floater_hormann(std::vector<R>, std::vector<R>, int);                                   \
    template Coefficient<R> make_coefficient<R>(const ProblemFile&);

PHASEFN_INSTANTIATE_PROBLEM(double)
PHASEFN_INSTANTIATE_PROBLEM(Quad)

}  // namespace phasefn
