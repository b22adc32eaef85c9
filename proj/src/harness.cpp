#include "phasefn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "phasefn/errors.hpp"
#include "phasefn/oracle.hpp"
#include "phasefn/phase.hpp"

namespace phasefn {

Precision parse_precision(const std::string& name) {
    if (name == "double") return Precision::double_;
    if (name == "quad") return Precision::quad;
    throw UsageError("unknown precision '" + name + "' (double|quad)");
}

std::string precision_label(Precision p) { return p == Precision::quad ? "quad" : "double"; }

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return std::nan("");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : std::nan("");
}

template <class Real>
nlohmann::json to_json(const HypothesisReport<Real>& h) {
    return {{"lambda", to_double(h.lambda)},
            {"gamma", to_double(h.gamma)},
            {"mu", to_double(h.mu)},
            {"lambda_threshold", to_double(h.lambda_threshold)},
            {"lambda_ok", h.lambda_ok},
            {"w_l1", to_double(h.w_l1)},
            {"w_l1_limit", to_double(h.w_l1_limit)},
            {"w_ok", h.w_ok},
            {"certified", h.certified()}};
}

template <class Real>
nlohmann::json to_json(const BoundsReport<Real>& r) {
    return {{"hypotheses", to_json(r.hypotheses)},
            {"iterations", r.iterations},
            {"max_contraction_ratio", to_double(r.max_contraction_ratio)},
            {"sigma_outside_max", to_double(r.sigma_outside_max)},
            {"sigma_support_ok", r.sigma_support_ok},
            {"sigma_slack", to_double(r.sigma_slack)},
            {"sigma_floor", to_double(r.sigma_floor)},
            {"sigma_max_ratio", to_double(r.sigma_max_ratio)},
            {"sigma_resolved_nodes", r.sigma_resolved_nodes},
            {"sigma_unresolved_nodes", r.sigma_unresolved_nodes},
            {"sigma_decay_ok", r.sigma_decay_ok},
            {"nu_slack", to_double(r.nu_slack)},
            {"nu_inf", to_double(r.nu_inf)},
            {"nu_bound", to_double(r.nu_bound)},
            {"nu_floor", to_double(r.nu_floor)},
            {"nu_resolved", r.nu_resolved},
            {"nu_ok", r.nu_ok},
            {"status", r.status}};
}

namespace {

// JSON has no inf/nan; those become null.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class Real>
SweepRow sweep_one(const ProblemFile& pf, double lambda, const SweepOptions& opts) {
    using clock = std::chrono::steady_clock;
    using std::abs;
    const auto start = clock::now();
    SweepRow row;
    row.lambda = lambda;
    try {
        GridOptions<Real> go;
        go.L = Real(opts.grid_L);
        go.N = opts.grid_N;
        const auto prob = make_problem(make_coefficient<Real>(pf), Real(lambda), go);
        SolveOptions<Real> so;
        so.tol = Real(opts.solve_tol);
        const auto sol = solve(prob, so);
        const auto& br = sol.bounds_report;
        row.iterations = sol.iterations;
        row.gamma = to_double(prob.gamma_fit);
        row.mu = to_double(prob.mu_fit);
        row.nu_inf = to_double(br.nu_inf);
        row.nu_floor = to_double(br.nu_floor);
        row.floor_limited = !br.nu_resolved || br.nu_inf <= br.nu_floor;
        row.status = br.status;

        const auto phase = build_phase(sol, prob);
        const Real a = prob.coefficient.interval_a, b = prob.coefficient.interval_b;
        Real rk = 0;
        for (const Real& r : kummer_residual(phase, prob, interior_nodes(a, b, 257))) rk = std::max(rk, Real(abs(r)));
        row.res_kummer = to_double(rk);

        const Real fit_tail = std::min(PrecisionDefaults<Real>::cheb_tail(), Real(kDegreeTail / 10));
        row.cheb_degree = static_cast<int>(delta_series(sol, prob, fit_tail).tail_degree(Real(kDegreeTail)));

        Real otol = Real(opts.oracle_tol);
        if (!(otol > 0)) otol = std::max(Real(40 * eps<Real>()), Real(kAutoOracleScale) * br.nu_inf / prob.lambda);
        row.oracle_tol = to_double(otol);
        const auto [eu, ev] = basis_error(phase, prob, otol);
        row.err_u = to_double(eu);
        row.err_v = to_double(ev);
    } catch (const std::exception& e) {
        row.status = "error";
        row.error = e.what();
    }
    if (!opts.no_timing) row.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
    return row;
}

}  // namespace

std::string SweepReport::to_csv() const {
    std::string s = "lambda,iterations,gamma,mu,nu_inf,res_kummer,err_u,err_v,cheb_degree,wall_ms\n";
    for (const auto& r : rows) {
        const bool ok = r.status != "error";
        const std::string nan = "nan";
        s += fmt(r.lambda) + "," + std::to_string(r.iterations) + "," + (ok ? fmt(r.gamma) : nan) + "," +
             (ok ? fmt(r.mu) : nan) + "," + (ok ? fmt(r.nu_inf) : nan) + "," + (ok ? fmt(r.res_kummer) : nan) + "," +
             (ok ? fmt(r.err_u) : nan) + "," + (ok ? fmt(r.err_v) : nan) + "," + std::to_string(r.cheb_degree) + "," +
             fmt(r.wall_ms) + "\n";
    }
    return s;
}

nlohmann::json SweepReport::to_json() const {
    nlohmann::json rows_j = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j = {{"lambda", r.lambda},
                            {"iterations", r.iterations},
                            {"gamma", num(r.gamma)},
                            {"mu", num(r.mu)},
                            {"nu_inf", num(r.nu_inf)},
                            {"nu_floor", num(r.nu_floor)},
                            {"floor_limited", r.floor_limited},
                            {"res_kummer", num(r.res_kummer)},
                            {"err_u", num(r.err_u)},
                            {"err_v", num(r.err_v)},
                            {"oracle_tol", num(r.oracle_tol)},
                            {"cheb_degree", r.cheb_degree},
                            {"wall_ms", r.wall_ms},
                            {"status", r.status}};
        if (!r.error.empty()) j["error"] = r.error;
        rows_j.push_back(std::move(j));
    }
    return {{"precision", precision}, {"rows", rows_j}};
}

SweepReport run_sweep(const ProblemFile& pf, const SweepOptions& opts) {
    if (opts.lambdas.empty()) throw UsageError("run_sweep: no lambdas given");
    for (double l : opts.lambdas)
        if (!(l > 0)) throw UsageError("run_sweep: lambdas must be positive");
    SweepReport rep;
    rep.precision = precision_label(opts.precision);
    rep.rows.resize(opts.lambdas.size());
    unsigned nt = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = std::min<unsigned>(nt, static_cast<unsigned>(opts.lambdas.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < opts.lambdas.size();) {
            rep.rows[i] = opts.precision == Precision::quad ? sweep_one<Quad>(pf, opts.lambdas[i], opts)
                                                            : sweep_one<double>(pf, opts.lambdas[i], opts);
        }
    };
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rep;
}

SweepReport run_sweep(const std::string& problem_path, const SweepOptions& opts, const std::string& out) {
    const SweepReport rep = run_sweep(load_problem_file(problem_path), opts);
    if (!out.empty()) {
        std::ofstream csv(out, std::ios::binary);
        if (!csv) throw UsageError("cannot write " + out);
        csv << rep.to_csv();
        std::ofstream js(out + ".json", std::ios::binary);
        if (!js) throw UsageError("cannot write " + out + ".json");
        js << rep.to_json().dump(2) << "\n";
    }
    return rep;
}

template nlohmann::json to_json(const HypothesisReport<double>&);
template nlohmann::json to_json(const HypothesisReport<Quad>&);
template nlohmann::json to_json(const BoundsReport<double>&);
template nlohmann::json to_json(const BoundsReport<Quad>&);

}  // namespace phasefn
