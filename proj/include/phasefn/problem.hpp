#pragma once

// Problem setup for y'' + lambda^2 q(t) y = 0 on [a, b]: extension of q to
// the real line, x(t) = int_a^t sqrt(q), the forcing
//   p(t) = (1/q) (5/4 (q'/q)^2 - q''/q)  (= 2{t, x}),
// its transform p^ and fitted decay constants |p^(xi)| <= Gamma exp(-mu |xi|).

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phasefn/expr.hpp"
#include "phasefn/grid.hpp"

namespace phasefn {

template <class Real>
using RealFn = std::function<Real(Real)>;

template <class Real>
struct Coefficient {
    RealFn<Real> q;
    RealFn<Real> dq;   // empty: 8th-order central differences, h = 1e-3 (b - a)
    RealFn<Real> d2q;  // empty: as dq
    Real interval_a = 0;
    Real interval_b = 1;
    Real extension_width = 0;  // <= 0 selects (b - a) / 2
};

template <class Real>
struct QJet {
    Real q, dq, d2q;
};

/// q on [a, b], blended to the constants q(a), q(b) by erf steps over
/// [a - 3w, a] and [b, b + 3w], exactly constant beyond.
template <class Real>
class ExtendedCoefficient {
public:
    explicit ExtendedCoefficient(Coefficient<Real> c);

    /// q, q', q'' of the extension; throws DomainError if q <= 0 or non-finite.
    QJet<Real> operator()(const Real& t) const;
    Real q(const Real& t) const;

    const Coefficient<Real>& base() const noexcept { return c_; }
    const Real& a() const noexcept { return c_.interval_a; }
    const Real& b() const noexcept { return c_.interval_b; }
    const Real& width() const noexcept { return w_; }
    Real lo() const { return a() - 3 * w_; }
    Real hi() const { return b() + 3 * w_; }

private:
    QJet<Real> base_jet(const Real& t) const;
    Coefficient<Real> c_;
    Real w_, qa_, qb_;
};

/// p(t) from q, q', q''.
template <class Real>
Real p_from_jet(const QJet<Real>& j);

template <class Real>
class CoordinateMap {
public:
    Real x_of_t(const Real& t) const;
    /// Safeguarded Newton inside the bracketing panel.
    Real t_of_x(const Real& x) const;
    Real x_b() const { return x_b_; }
    const Real& tol() const noexcept { return tol_; }
    std::size_t panels() const noexcept { return t_.size() - 1; }

private:
    template <class R>
    friend CoordinateMap<R> build_map(std::shared_ptr<const ExtendedCoefficient<R>> c, const R& tol);

    Real panel_x(std::size_t i, const Real& t) const;
    std::shared_ptr<const ExtendedCoefficient<Real>> c_;
    std::vector<Real> t_, x_;  // panel knots and x at knots
    Real tol_ = 0, x_b_ = 0, slope_lo_ = 1, slope_hi_ = 1;
};

/// Adaptive Gauss-Legendre panels over [a - 3w, b + 3w]; linear beyond (q constant there).
template <class Real>
CoordinateMap<Real> build_map(std::shared_ptr<const ExtendedCoefficient<Real>> c, const Real& tol);

template <class Real>
CoordinateMap<Real> build_map(const Coefficient<Real>& c, const Real& tol);

/// p(x_j) = p(t(x_j)); throws ConfigurationError if p at +-L is not negligible.
template <class Real>
RealSample<Real> schwarzian_p(const ExtendedCoefficient<Real>& c, const CoordinateMap<Real>& map,
                              const SpectralGrid<Real>& grid);

template <class Real>
struct DecayFit {
    Real gamma = 0;
    Real mu = 0;  // +inf when degenerate
    bool degenerate = false;
    int fit_nodes = 0;
    Real floor = 0;  // nodes with |p^| <= floor are excluded from Gamma
};

/// Least squares on (|xi|, log|p^|) over nodes with |p^| > 1e-12 max|p^|, then
/// Gamma = max |p^| exp(mu |xi|) over nodes above `floor`.
template <class Real>
DecayFit<Real> fit_decay(const SpectralSample<Real>& p_hat, const Real& floor = Real(0));

template <class Real>
struct GridOptions {
    Real L = 0;         // <= 0: 1.1 max |x| over the extended interval
    std::size_t N = 0;  // 0: smallest power of two resolving 2 sqrt2 lambda and the p^ tail
    Real map_tol = 0;   // <= 0: precision default
};

template <class Real>
struct CoefficientProblem {
    Coefficient<Real> coefficient;
    std::shared_ptr<const ExtendedCoefficient<Real>> extended;
    Real lambda;
    CoordinateMap<Real> map;
    SpectralGrid<Real> grid;
    RealSample<Real> p_x;
    SpectralSample<Real> p_hat;
    Real gamma_fit;
    Real mu_fit;
    bool degenerate;
    Real p_floor;  // a-priori rounding floor of p_hat
};

template <class Real>
CoefficientProblem<Real> make_problem(const Coefficient<Real>& c, const Real& lambda,
                                      const GridOptions<Real>& opts = {});

template <class Real>
struct HypothesisReport {
    Real lambda, gamma, mu;
    Real lambda_threshold;  // 2 max(1/mu, Gamma)
    bool lambda_ok;
    Real w_l1, w_l1_limit;  // ||w||_1 and (pi/2) lambda^2
    bool w_ok;
    bool certified() const { return lambda_ok && w_ok; }
};

template <class Real>
HypothesisReport<Real> check_hypotheses(const CoefficientProblem<Real>& prob);

/// Barycentric rational interpolant (Floater-Hormann, blending degree d) through (t_k, q_k).
template <class Real>
RealFn<Real> floater_hormann(std::vector<Real> t, std::vector<Real> v, int d = 8);

/// Problem definition file contents.
struct ProblemFile {
    std::optional<std::string> q_expr, dq_expr, d2q_expr;
    std::vector<std::string> table_t, table_q;  // decimal text, parsed at the working precision
    std::string a, b;
    std::optional<std::string> lambda;
    std::optional<std::string> grid_L;
    std::optional<std::size_t> grid_N;
    std::optional<std::string> extension_width;
};

ProblemFile parse_problem_json(const std::string& json_text);
ProblemFile load_problem_file(const std::string& path);

/// Expression coefficients without dq/d2q are differentiated exactly by
/// forward-mode jets; tables use Floater-Hormann and finite differences.
template <class Real>
Coefficient<Real> make_coefficient(const ProblemFile& pf);

}  // namespace phasefn
