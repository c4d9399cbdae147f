#pragma once

// Executes a RunSpec and writes its outputs:
//   results CSV   N,l2_e,linf_e,l2_estar,linf_estar,runtime_ms
//   plot data     N and log10 of each error channel, whitespace separated
//   nodal dump    theta,phi,phi_star at the collocation points (solve mode)

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "muntz/analysis.hpp"
#include "muntz/collocation.hpp"
#include "muntz/config.hpp"
#include "muntz/problem.hpp"

namespace muntz {

inline constexpr const char* kResultsHeader = "N,l2_e,linf_e,l2_estar,linf_estar,runtime_ms";

namespace detail {

inline std::string sci6(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

inline std::string log10_field(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", std::log10(v));
    return buf;
}

inline void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << body;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace detail

inline VideProblem make_problem(const RunSpec& s) {
    if (s.problem == "custom") {
        VideProblem p;
        p.name = "custom";
        p.mu = s.mu;
        p.eps = s.eps;
        p.T = s.T;
        p.y0 = s.y0.value_or(0.0);
        p.a1 = [c = s.a1](double) { return c; };
        p.b1 = [c = s.b1](double) { return c; };
        p.f1 = [c = s.f1](double) { return c; };
        p.K1 = [c = s.k1](double, double) { return c; };
        p.K2 = [c = s.k2](double, double) { return c; };
        return p;
    }
    ExampleParams prm;
    prm.mu = s.mu;
    prm.eps = s.eps;
    prm.T = s.T;
    prm.y0 = s.y0;
    return example_problem(s.problem, prm, s.forcing);
}

inline SweepConfig make_sweep_config(const RunSpec& s) {
    SweepConfig cfg;
    cfg.solver.lambda = s.lambda;
    cfg.solver.alpha = s.alpha;
    cfg.solver.beta = s.beta;
    cfg.solver.quad_points = s.quad_points;
    cfg.linf_grid = s.linf_grid;
    cfg.l2_points = s.l2_points;
    return cfg;
}

/// Results CSV body; runtimes are written as 0 when `timing` is false.
inline std::string format_results_csv(const ConvergenceTable& table, bool timing = true) {
    std::string out = std::string(kResultsHeader) + "\n";
    for (const auto& r : table.rows) {
        out += std::to_string(r.N) + "," + detail::sci6(r.l2_e) + "," + detail::sci6(r.linf_e) + "," +
               detail::sci6(r.l2_estar) + "," + detail::sci6(r.linf_estar) + "," +
               detail::sci6(timing ? r.runtime_ms : 0.0) + "\n";
    }
    return out;
}

inline std::string format_plot_data(const ConvergenceTable& table) {
    if (table.rows.empty()) throw std::invalid_argument("emit_plot_data: table is empty");
    std::string out;
    for (const auto& r : table.rows) {
        out += std::to_string(r.N) + " " + detail::log10_field(r.l2_e) + " " + detail::log10_field(r.linf_e) + " " +
               detail::log10_field(r.l2_estar) + " " + detail::log10_field(r.linf_estar) + "\n";
    }
    return out;
}

inline void emit_plot_data(const ConvergenceTable& table, const std::string& path) {
    detail::write_file(path, format_plot_data(table));
}

inline std::string format_nodal_csv(const CollocationSolution& sol) {
    std::string out = "theta,phi,phi_star\n";
    char buf[96];
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e\n", sol.grid.points[i], sol.nodal.u(k), sol.nodal.u_star(k));
        out += buf;
    }
    return out;
}

inline std::string summary_line(const ConvergenceRow& r) {
    if (!r.ok) return "N=" + std::to_string(r.N) + " FAILED: " + r.error;
    return "N=" + std::to_string(r.N) + " l2_e=" + detail::sci6(r.l2_e) + " linf_e=" + detail::sci6(r.linf_e) +
           " l2_estar=" + detail::sci6(r.l2_estar) + " linf_estar=" + detail::sci6(r.linf_estar) +
           " runtime_ms=" + detail::sci6(r.runtime_ms);
}

/// Runs the spec, writes its files and one summary line per row to `log`.
/// Returns 0 when every row succeeded, 1 otherwise.
inline int run(const RunSpec& spec, std::ostream& log) {
    const VideProblem problem = make_problem(spec);
    const SweepConfig cfg = make_sweep_config(spec);

    std::optional<ReferenceSolution> reference;
    if (spec.mode == Mode::Compare || spec.ref_n) {
        reference = reference_solution(problem, cfg.solver, *spec.ref_n);
    }

    const ConvergenceTable table = convergence_sweep(problem, cfg, spec.n_values, reference);
    for (const auto& r : table.rows) log << summary_line(r) << '\n';

    detail::write_file(spec.output, format_results_csv(table, spec.timing));
    emit_plot_data(table, spec.plot_output);
    if (spec.mode == Mode::Solve && table.all_ok()) {
        const CollocationSolution sol = solve_vide(problem, spec.n_values.front(), cfg.solver);
        detail::write_file(spec.nodal_output, format_nodal_csv(sol));
    }
    return table.all_ok() ? 0 : 1;
}

}  // namespace muntz
