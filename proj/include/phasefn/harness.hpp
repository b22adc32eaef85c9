#pragma once

// Lambda sweeps over a problem file, report serialization and the self-test suite.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "phasefn/problem.hpp"
#include "phasefn/solver.hpp"

namespace phasefn {

enum class Precision { double_, quad };

Precision parse_precision(const std::string& name);
std::string precision_label(Precision p);

/// Oracle tolerance used when none is given: max(40 eps, kAutoOracleScale * ||nu||_inf / lambda).
inline constexpr double kAutoOracleScale = 1e-4;
/// Relative tail sum defining the Chebyshev degree of delta (see ChebyshevSeries::tail_degree).
inline constexpr double kDegreeTail = 1e-12;

struct SweepOptions {
    std::vector<double> lambdas;
    Precision precision = Precision::double_;
    double oracle_tol = 0;  // <= 0: automatic
    double solve_tol = 0;   // <= 0: precision default
    double grid_L = 0;
    std::size_t grid_N = 0;
    bool no_timing = false;  // wall_ms written as 0
    unsigned threads = 0;    // 0: hardware concurrency
};

struct SweepRow {
    double lambda = 0;
    int iterations = -1;
    double gamma = 0, mu = 0;
    double nu_inf = 0, nu_floor = 0;
    double res_kummer = 0;
    double err_u = 0, err_v = 0;
    int cheb_degree = -1;
    double wall_ms = 0;
    double oracle_tol = 0;
    bool floor_limited = false;
    std::string status;  // bounds status, or "error"
    std::string error;
};

struct SweepReport {
    std::string precision;
    std::vector<SweepRow> rows;

    /// lambda,iterations,gamma,mu,nu_inf,res_kummer,err_u,err_v,cheb_degree,wall_ms
    std::string to_csv() const;
    nlohmann::json to_json() const;
};

SweepReport run_sweep(const ProblemFile& pf, const SweepOptions& opts);

/// Loads the problem, runs the sweep and writes `out` (CSV) next to `out`.json.
SweepReport run_sweep(const std::string& problem_path, const SweepOptions& opts, const std::string& out);

/// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

template <class Real>
nlohmann::json to_json(const HypothesisReport<Real>& h);

template <class Real>
nlohmann::json to_json(const BoundsReport<Real>& r);

/// Invariant checks at small scale; one PASS/FAIL line each. Returns true when all pass.
bool run_selftest(std::ostream& out);

}  // namespace phasefn
