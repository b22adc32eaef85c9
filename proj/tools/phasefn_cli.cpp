// phasefn: solve, verify and sweep nonoscillatory phase function problems.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "phasefn/errors.hpp"
#include "phasefn/harness.hpp"
#include "phasefn/oracle.hpp"
#include "phasefn/phase.hpp"
#include "phasefn/problem.hpp"
#include "phasefn/solver.hpp"

using namespace phasefn;

namespace {

struct Common {
    std::string problem;
    std::string lambda;
    std::size_t grid_N = 0;
    std::string grid_L;
    std::string tol;
    std::string out;
    std::string precision = "double";
};

template <class Real>
CoefficientProblem<Real> load(const Common& c, const ProblemFile& pf) {
    std::string lam = c.lambda;
    if (lam.empty()) {
        if (!pf.lambda) throw UsageError("no --lambda given and the problem file has none");
        lam = *pf.lambda;
    }
    GridOptions<Real> go;
    if (!c.grid_L.empty()) go.L = parse_real<Real>(c.grid_L);
    else if (pf.grid_L) go.L = parse_real<Real>(*pf.grid_L);
    go.N = c.grid_N ? c.grid_N : pf.grid_N.value_or(0);
    return make_problem(make_coefficient<Real>(pf), parse_real<Real>(lam), go);
}

template <class Real>
SolveOptions<Real> solve_options(const Common& c) {
    SolveOptions<Real> so;
    if (!c.tol.empty()) so.tol = parse_real<Real>(c.tol);
    return so;
}

void write(const std::string& path, const nlohmann::json& j) {
    if (path.empty()) return;
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    f << j.dump(2) << "\n";
}

template <class Real>
int cmd_solve(const Common& c) {
    const ProblemFile pf = load_problem_file(c.problem);
    const auto prob = load<Real>(c, pf);
    const auto sol = solve(prob, solve_options<Real>(c));
    const auto& br = sol.bounds_report;
    std::cout << "precision " << precision_name<Real>() << "  grid L=" << to_double(prob.grid.half_width())
              << " N=" << prob.grid.size() << "\n"
              << "Gamma=" << to_double(prob.gamma_fit) << " mu=" << to_double(prob.mu_fit)
              << " lambda*=" << to_double(br.hypotheses.lambda_threshold) << "\n"
              << "iterations=" << sol.iterations << " max ratio=" << to_double(br.max_contraction_ratio) << "\n"
              << "||nu||_inf=" << to_double(br.nu_inf) << " bound=" << to_double(br.nu_bound) << "\n"
              << "status " << br.status << "\n";
    write(c.out, to_json(br));
    return br.status == "certified" ? 0 : 1;
}

template <class Real>
int cmd_verify(const Common& c, const std::string& oracle_tol) {
    using std::abs;
    const ProblemFile pf = load_problem_file(c.problem);
    const auto prob = load<Real>(c, pf);
    const auto sol = solve(prob, solve_options<Real>(c));
    const auto& br = sol.bounds_report;
    const auto phase = build_phase(sol, prob);
    const Real a = prob.coefficient.interval_a, b = prob.coefficient.interval_b;
    Real rk = 0;
    for (const Real& r : kummer_residual(phase, prob, interior_nodes(a, b, 257))) rk = std::max(rk, Real(abs(r)));
    Real otol = oracle_tol.empty() ? Real(0) : parse_real<Real>(oracle_tol);
    if (!(otol > 0)) otol = std::max(Real(40 * eps<Real>()), Real(kAutoOracleScale) * br.nu_inf / prob.lambda);
    const auto [eu, ev] = basis_error(phase, prob, otol);
    const Real ie = integral_equation_residual(sol, prob);
    nlohmann::json j = {{"bounds_report", to_json(br)},
                        {"res_kummer", to_double(rk)},
                        {"integral_equation_residual", to_double(ie)},
                        {"oracle_tol", to_double(otol)},
                        {"err_u", to_double(eu)},
                        {"err_v", to_double(ev)}};
    std::cout << j.dump(2) << "\n";
    write(c.out, j);
    return br.status == "certified" ? 0 : 1;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError("bad lambda '" + item + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonoscillatory phase functions by band-limited fixed-point iteration"};
    app.require_subcommand(1);
    Common c;
    std::string oracle_tol, lambdas;
    bool no_timing = false;
    unsigned threads = 0;

    auto add_common = [&](CLI::App* sub, bool with_lambda) {
        sub->add_option("problem", c.problem, "problem JSON file")->required()->check(CLI::ExistingFile);
        if (with_lambda) sub->add_option("--lambda", c.lambda, "frequency parameter");
        sub->add_option("--grid-N", c.grid_N, "grid size (power of two)");
        sub->add_option("--grid-L", c.grid_L, "grid half-width");
        sub->add_option("--tol", c.tol, "fixed-point tolerance");
        sub->add_option("--precision", c.precision, "double or quad")->check(CLI::IsMember({"double", "quad"}));
    };
    auto* solve_cmd = app.add_subcommand("solve", "solve and check the bounds");
    add_common(solve_cmd, true);
    solve_cmd->add_option("--out", c.out, "bounds report JSON");
    auto* verify_cmd = app.add_subcommand("verify", "solve, build the phase and compare with the ODE oracle");
    add_common(verify_cmd, true);
    verify_cmd->add_option("--oracle-tol", oracle_tol, "oracle tolerance (default: automatic)");
    verify_cmd->add_option("--out", c.out, "verification JSON");
    auto* sweep_cmd = app.add_subcommand("sweep", "lambda sweep to CSV and JSON");
    add_common(sweep_cmd, false);
    sweep_cmd->add_option("--lambdas", lambdas, "comma separated")->required();
    sweep_cmd->add_option("--out", c.out, "CSV path (JSON written to <out>.json)")->required();
    sweep_cmd->add_option("--oracle-tol", oracle_tol, "oracle tolerance (default: automatic)");
    sweep_cmd->add_flag("--no-timing", no_timing, "write wall_ms = 0");
    sweep_cmd->add_option("--threads", threads, "worker threads (default: all cores)");
    auto* selftest_cmd = app.add_subcommand("selftest", "run the invariant checks");

    CLI11_PARSE(app, argc, argv);

    try {
        const bool quad = parse_precision(c.precision) == Precision::quad;
        if (*solve_cmd) return quad ? cmd_solve<Quad>(c) : cmd_solve<double>(c);
        if (*verify_cmd) return quad ? cmd_verify<Quad>(c, oracle_tol) : cmd_verify<double>(c, oracle_tol);
        if (*sweep_cmd) {
            SweepOptions so;
            so.lambdas = parse_list(lambdas);
            so.precision = parse_precision(c.precision);
            so.oracle_tol = oracle_tol.empty() ? 0 : std::stod(oracle_tol);
            so.solve_tol = c.tol.empty() ? 0 : std::stod(c.tol);
            so.grid_L = c.grid_L.empty() ? 0 : std::stod(c.grid_L);
            so.grid_N = c.grid_N;
            so.no_timing = no_timing;
            so.threads = threads;
            const auto rep = run_sweep(c.problem, so, c.out);
            std::cout << rep.to_csv();
            for (const auto& r : rep.rows)
                if (r.status == "error") {
                    std::cerr << "lambda " << r.lambda << ": " << r.error << "\n";
                    return 2;
                }
            return 0;
        }
        if (*selftest_cmd) return run_selftest(std::cout) ? 0 : 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
