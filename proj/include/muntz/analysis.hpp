#pragma once

// Error norms, convergence sweeps and rate fitting.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "muntz/collocation.hpp"
#include "muntz/problem.hpp"
#include "muntz/quadrature.hpp"

namespace muntz {

using ErrorFn = std::function<double(double)>;

/// (sum_k err(theta_k)^2 w_k)^(1/2) with the M-point Gauss-Jacobi rule for
/// (1-theta)^alpha theta^beta on [0,1].
inline double weighted_l2_error(const ErrorFn& err, double alpha, double beta, std::size_t M) {
    const FractionalRule rule = gauss_jacobi_unit(M, alpha, beta);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const double e = err(rule.nodes[k]);
        sum += e * e * rule.weights[k];
    }
    return std::sqrt(sum);
}

inline constexpr double kLinfLeftEnd = 1e-12;

/// max |err| over grid_size uniform points on [1e-12, 1] together with `extra_points`.
inline double linf_error(const ErrorFn& err, std::size_t grid_size, std::span<const double> extra_points = {}) {
    if (grid_size < 2) throw std::invalid_argument("linf_error: grid_size must be at least 2");
    double worst = 0.0;
    const double h = (1.0 - kLinfLeftEnd) / static_cast<double>(grid_size - 1);
    for (std::size_t k = 0; k < grid_size; ++k) {
        const double th = k + 1 == grid_size ? 1.0 : kLinfLeftEnd + h * static_cast<double>(k);
        worst = std::max(worst, std::fabs(err(th)));
    }
    for (double th : extra_points) worst = std::max(worst, std::fabs(err(th)));
    return worst;
}

inline std::size_t default_l2_points(int N) { return std::max<std::size_t>(4 * static_cast<std::size_t>(N), 200); }

// ---------------------------------------------------------------------------

/// A high-N solve standing in for the exact solution.
class ReferenceSolution {
public:
    ReferenceSolution(CollocationSolution sol, int n_ref)
        : sol_(std::make_shared<const CollocationSolution>(std::move(sol))), n_ref_(n_ref) {}

    /// (phi, phi*) on the unit interval.
    [[nodiscard]] std::pair<double, double> operator()(double theta) const { return sol_->at(theta); }
    [[nodiscard]] int n_ref() const noexcept { return n_ref_; }
    [[nodiscard]] const CollocationSolution& solution() const noexcept { return *sol_; }

private:
    std::shared_ptr<const CollocationSolution> sol_;
    int n_ref_;
};

inline ReferenceSolution reference_solution(const VideProblem& p, const SolverOptions& opt, int n_ref) {
    return ReferenceSolution(solve_vide(p, n_ref, opt), n_ref);
}

struct SweepConfig {
    SolverOptions solver;
    std::size_t linf_grid = 2001;
    std::size_t l2_points = 0;  // 0: max(4N, 200)
    std::optional<double> l2_alpha;  // defaults to the grid exponents
    std::optional<double> l2_beta;
};

struct ConvergenceRow {
    int N = 0;
    double l2_e = 0.0;
    double linf_e = 0.0;
    double l2_estar = 0.0;
    double linf_estar = 0.0;
    double runtime_ms = 0.0;
    bool ok = true;
    std::string error;
};

struct ConvergenceTable {
    std::string problem_id;
    double lambda = 1.0;
    double alpha = -0.5;
    double beta = -0.5;
    double eps = 0.5;
    double mu = 0.0;
    double T = 1.0;
    std::vector<ConvergenceRow> rows;  // strictly increasing N

    [[nodiscard]] bool all_ok() const {
        return std::all_of(rows.begin(), rows.end(), [](const ConvergenceRow& r) { return r.ok; });
    }
};

enum class ErrorChannel { L2E, LinfE, L2EStar, LinfEStar };

inline double channel_value(const ConvergenceRow& r, ErrorChannel c) {
    switch (c) {
        case ErrorChannel::L2E: return r.l2_e;
        case ErrorChannel::LinfE: return r.linf_e;
        case ErrorChannel::L2EStar: return r.l2_estar;
        case ErrorChannel::LinfEStar: return r.linf_estar;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// Errors of one solve against (phi, phi*) supplied by `truth`.
inline ConvergenceRow measure_errors(const CollocationSolution& sol,
                                     const std::function<std::pair<double, double>(double)>& truth,
                                     const SweepConfig& cfg) {
    const int N = sol.grid.N;
    const double la = cfg.l2_alpha.value_or(cfg.solver.alpha);
    const double lb = cfg.l2_beta.value_or(cfg.solver.beta);
    const std::size_t M = cfg.l2_points == 0 ? default_l2_points(N) : cfg.l2_points;
    ErrorFn e = [&](double th) { return truth(th).first - sol.at(th).first; };
    ErrorFn es = [&](double th) { return truth(th).second - sol.at(th).second; };
    ConvergenceRow row;
    row.N = N;
    row.l2_e = weighted_l2_error(e, la, lb, M);
    row.l2_estar = weighted_l2_error(es, la, lb, M);
    row.linf_e = linf_error(e, cfg.linf_grid, sol.grid.points);
    row.linf_estar = linf_error(es, cfg.linf_grid, sol.grid.points);
    return row;
}

/// One solve per N. Errors are taken against the exact solution when the
/// problem has one and no reference is given, otherwise against the reference.
/// Solver failures mark the row instead of aborting the sweep.
inline ConvergenceTable convergence_sweep(const VideProblem& p, const SweepConfig& cfg, std::span<const int> n_list,
                                          const std::optional<ReferenceSolution>& reference = std::nullopt) {
    if (n_list.empty()) throw std::invalid_argument("convergence_sweep: empty N list");
    for (std::size_t k = 1; k < n_list.size(); ++k) {
        if (n_list[k] <= n_list[k - 1]) throw std::invalid_argument("convergence_sweep: N list must be strictly increasing");
    }
    if (reference && n_list.back() >= reference->n_ref()) {
        throw std::invalid_argument("convergence_sweep: reference N must exceed every compared N");
    }
    if (!reference && !p.exact) {
        throw std::invalid_argument("convergence_sweep: problem '" + p.name + "' has no exact solution; supply a reference");
    }

    const ScaledProblem sp = scale_to_unit(p);
    std::function<std::pair<double, double>(double)> truth;
    if (reference) {
        truth = [ref = *reference](double th) { return ref(th); };
    } else {
        truth = [ex = *sp.exact](double th) { return std::pair{ex.y(th), ex.dy(th)}; };
    }

    ConvergenceTable table;
    table.problem_id = p.name;
    table.lambda = cfg.solver.lambda;
    table.alpha = cfg.solver.alpha;
    table.beta = cfg.solver.beta;
    table.eps = p.eps;
    table.mu = p.mu;
    table.T = p.T;
    for (int N : n_list) {
        try {
            const auto t0 = std::chrono::steady_clock::now();
            CollocationSolution sol = solve_scaled(sp, N, cfg.solver);
            const auto t1 = std::chrono::steady_clock::now();
            ConvergenceRow row = measure_errors(sol, truth, cfg);
            row.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            table.rows.push_back(std::move(row));
        } catch (const std::exception& ex) {
            ConvergenceRow row;
            const double nan = std::numeric_limits<double>::quiet_NaN();
            row.N = N;
            row.l2_e = row.linf_e = row.l2_estar = row.linf_estar = nan;
            row.ok = false;
            row.error = ex.what();
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

// ---------------------------------------------------------------------------

enum class RateClass { Exponential, Algebraic };

inline const char* to_string(RateClass c) { return c == RateClass::Exponential ? "exponential" : "algebraic"; }

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double rms_residual = 0.0;
};

struct RateReport {
    LineFit exponential;  // log10(err) against N
    LineFit algebraic;    // log10(err) against log10(N)
    RateClass classification = RateClass::Algebraic;
    std::size_t points = 0;
};

class InsufficientDataError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline LineFit least_squares(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double r = y[k] - (fit.intercept + fit.slope * x[k]);
        ss_res += r * r;
    }
    fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.rms_residual = std::sqrt(ss_res / n);
    return fit;
}

}  // namespace detail

/// Fits log10(err) linearly in N and in log10(N). "exponential" when the
/// linear-in-N fit explains at least 95% of the variance with slope <= -0.5.
/// Non-positive or non-finite errors are skipped.
inline RateReport fit_rates(std::span<const int> n_values, std::span<const double> errors) {
    if (n_values.size() != errors.size()) throw std::invalid_argument("fit_rates: length mismatch");
    std::vector<double> xn, xl, y;
    for (std::size_t k = 0; k < errors.size(); ++k) {
        if (errors[k] > 0.0 && std::isfinite(errors[k]) && n_values[k] > 0) {
            xn.push_back(n_values[k]);
            xl.push_back(std::log10(static_cast<double>(n_values[k])));
            y.push_back(std::log10(errors[k]));
        }
    }
    if (y.size() < 3) throw InsufficientDataError("fit_rates: need at least 3 usable rows");
    RateReport rep;
    rep.points = y.size();
    rep.exponential = detail::least_squares(xn, y);
    rep.algebraic = detail::least_squares(xl, y);
    rep.classification = (rep.exponential.r2 >= 0.95 && rep.exponential.slope <= -0.5) ? RateClass::Exponential
                                                                                      : RateClass::Algebraic;
    return rep;
}

inline RateReport fit_rates(const ConvergenceTable& table, ErrorChannel channel = ErrorChannel::LinfE) {
    std::vector<int> ns;
    std::vector<double> errs;
    for (const auto& r : table.rows) {
        if (!r.ok) continue;
        ns.push_back(r.N);
        errs.push_back(channel_value(r, channel));
    }
    return fit_rates(ns, errs);
}

}  // namespace muntz
