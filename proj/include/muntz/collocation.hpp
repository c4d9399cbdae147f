#pragma once

// Fractional Jacobi collocation for the rescaled equation. With
// phi_i ~ phi(theta_i), phi*_i ~ phi'(theta_i) and v_i ~ phi(eps theta_i):
//
//   U* = (A + C + D) U + B V + F,   U = U0 + E U*,   V = U0 + H U*.
//
// A, B are diagonal (a~, b~ at the nodes); C, D hold the product-Gauss
// discretisations of the two weakly singular integrals and E, H the exact
// integration of the Muntz interpolant of phi* over [0, theta_i] and
// [0, eps theta_i].

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "muntz/muntz_basis.hpp"
#include "muntz/problem.hpp"
#include "muntz/quadrature.hpp"

namespace muntz {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    [[nodiscard]] double condition() const noexcept { return condition_; }

private:
    double condition_;
};

struct SolverOptions {
    double lambda = 1.0;
    double alpha = -0.5;          // collocation grid exponents
    double beta = -0.5;
    std::size_t quad_points = 0;  // 0: N+1 points, as in the scheme
    bool newton_polish = true;
};

struct SystemMatrices {
    Vector a_diag;  // A = diag(a~(theta_i))
    Vector b_diag;  // B = diag(b~(theta_i))
    Matrix C;
    Matrix D;
    Matrix E;
    Matrix H;
    Vector F;
    Vector U0;

    [[nodiscard]] Eigen::Index dim() const noexcept { return F.size(); }
};

struct DiscreteSolution {
    Vector u_star;  // phi*_i
    Vector u;       // phi_i
    Vector v;       // v_i ~ phi(eps theta_i)
    double condition = 0.0;  // 1-norm condition estimate of the reduced system
};

enum class KernelChannel { First = 1, Second = 2 };

/// K~1(theta_i, eta_i(xi)) or K~2(theta_i, eps eta_i(xi)), eta_i(xi) = theta_i xi^(1/lambda).
inline double kernel_tilde(const ScaledProblem& sp, double theta_i, double xi, KernelChannel which, double lambda) {
    const double eta = theta_i * std::pow(xi, 1.0 / lambda);
    const double pre = std::pow(theta_i, 1.0 - sp.mu) / lambda * singular_ratio(xi, lambda, sp.mu);
    if (which == KernelChannel::First) return pre * sp.kbar1(theta_i, eta);
    return pre * sp.kbar2(theta_i, sp.eps * eta);
}

/// Rule for (1-xi)^-mu xi^(1/lambda-1) on [0,1].
inline FractionalRule kernel_rule(std::size_t npts, double mu, double lambda, bool newton_polish = true) {
    return gauss_jacobi_unit(npts, -mu, 1.0 / lambda - 1.0, newton_polish);
}

/// Rule for xi^(1/lambda-1) on [0,1].
inline FractionalRule integration_rule(std::size_t npts, double lambda, bool newton_polish = true) {
    return gauss_jacobi_unit(npts, 0.0, 1.0 / lambda - 1.0, newton_polish);
}

namespace detail {

inline void check_rule(const FractionalRule& rule, double alpha, double beta, const char* which) {
    constexpr double tol = 1e-10;
    if (rule.size() == 0) throw std::invalid_argument(std::string("assemble: empty ") + which + " rule");
    if (rule.lambda != 1.0 || std::fabs(rule.alpha - alpha) > tol || std::fabs(rule.beta - beta) > tol) {
        throw std::invalid_argument(std::string("assemble: ") + which +
                                    " rule parameters do not match (mu, lambda) of the problem and grid");
    }
}

}  // namespace detail

/// Builds A, B, C, D, E, H, F and U0. quad_mu integrates against
/// (1-xi)^-mu xi^(1/lambda-1), quad_hat against xi^(1/lambda-1), both on [0,1].
inline SystemMatrices assemble(const ScaledProblem& sp, const CollocationGrid& grid, const FractionalRule& quad_mu,
                               const FractionalRule& quad_hat) {
    const double lambda = grid.lambda;
    const double beta_q = 1.0 / lambda - 1.0;
    detail::check_rule(quad_mu, -sp.mu, beta_q, "kernel");
    detail::check_rule(quad_hat, 0.0, beta_q, "integration");
    const auto n = static_cast<Eigen::Index>(grid.size());
    if (n == 0) throw std::invalid_argument("assemble: empty collocation grid");

    SystemMatrices sys;
    sys.a_diag.resize(n);
    sys.b_diag.resize(n);
    sys.F.resize(n);
    sys.U0 = Vector::Constant(n, sp.phi0);
    sys.C = Matrix::Zero(n, n);
    sys.D = Matrix::Zero(n, n);
    sys.E = Matrix::Zero(n, n);
    sys.H = Matrix::Zero(n, n);

    const double inv_lambda = 1.0 / lambda;
    const double eps = sp.eps;
    std::vector<double> basis(grid.size());

    for (Eigen::Index i = 0; i < n; ++i) {
        const double th = grid.points[static_cast<std::size_t>(i)];
        sys.a_diag(i) = sp.a(th);
        sys.b_diag(i) = sp.b(th);
        sys.F(i) = sp.f(th);

        for (std::size_t k = 0; k < quad_mu.size(); ++k) {
            const double xi = quad_mu.nodes[k];
            const double w = quad_mu.weights[k];
            const double eta = th * std::pow(xi, inv_lambda);

            const double k1 = kernel_tilde(sp, th, xi, KernelChannel::First, lambda);
            basis_eval_all(grid, eta, basis);
            for (Eigen::Index j = 0; j < n; ++j) sys.C(i, j) += k1 * basis[static_cast<std::size_t>(j)] * w;

            const double k2 = kernel_tilde(sp, th, xi, KernelChannel::Second, lambda);
            basis_eval_all(grid, eps * eta, basis);
            for (Eigen::Index j = 0; j < n; ++j) sys.D(i, j) += k2 * basis[static_cast<std::size_t>(j)] * w;
        }

        for (std::size_t k = 0; k < quad_hat.size(); ++k) {
            const double xi = quad_hat.nodes[k];
            const double w = quad_hat.weights[k] * th * inv_lambda;
            const double eta = th * std::pow(xi, inv_lambda);

            basis_eval_all(grid, eta, basis);
            for (Eigen::Index j = 0; j < n; ++j) sys.E(i, j) += basis[static_cast<std::size_t>(j)] * w;

            basis_eval_all(grid, eps * eta, basis);
            for (Eigen::Index j = 0; j < n; ++j) sys.H(i, j) += eps * basis[static_cast<std::size_t>(j)] * w;
        }
    }
    return sys;
}

/// Solves [I - (A+C+D)E - BH] U* = (A+C+D+B) U0 + F, then U = U0 + E U*, V = U0 + H U*.
inline DiscreteSolution solve(const SystemMatrices& sys) {
    const Eigen::Index n = sys.dim();
    Matrix acd = sys.C + sys.D;
    acd.diagonal() += sys.a_diag;

    Matrix M = Matrix::Identity(n, n) - acd * sys.E - sys.b_diag.asDiagonal() * sys.H;
    Vector rhs = acd * sys.U0 + sys.b_diag.cwiseProduct(sys.U0) + sys.F;

    Eigen::PartialPivLU<Matrix> lu(M);
    const double rcond = lu.rcond();
    const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(rcond > 10.0 * std::numeric_limits<double>::epsilon())) {
        throw SingularSystemError("solve: collocation system is singular to working precision (condition ~ " +
                                      std::to_string(condition) + ")",
                                  condition);
    }

    DiscreteSolution sol;
    sol.u_star = lu.solve(rhs);
    sol.u = sys.U0 + sys.E * sol.u_star;
    sol.v = sys.U0 + sys.H * sol.u_star;
    sol.condition = condition;
    return sol;
}

/// (phi_N(theta), phi*_N(theta)).
inline std::pair<double, double> eval_solution(const CollocationGrid& grid, const DiscreteSolution& sol,
                                               double theta) {
    const std::span<const double> u(sol.u.data(), static_cast<std::size_t>(sol.u.size()));
    const std::span<const double> us(sol.u_star.data(), static_cast<std::size_t>(sol.u_star.size()));
    return {interpolate(grid, u, theta), interpolate(grid, us, theta)};
}

/// A solved instance: grid, nodal values and the horizon needed to map back to t.
struct CollocationSolution {
    CollocationGrid grid;
    DiscreteSolution nodal;
    double T = 1.0;

    [[nodiscard]] std::pair<double, double> at(double theta) const { return eval_solution(grid, nodal, theta); }

    /// y_N(t) and y'_N(t) = phi*_N(t/T) / T.
    [[nodiscard]] std::pair<double, double> at_time(double t) const {
        const auto [phi, dphi] = at(t / T);
        return {phi, dphi / T};
    }
};

inline CollocationSolution solve_scaled(const ScaledProblem& sp, int N, const SolverOptions& opt) {
    CollocationSolution out;
    out.grid = build_grid(N, opt.alpha, opt.beta, opt.lambda, opt.newton_polish);
    const std::size_t q = opt.quad_points == 0 ? static_cast<std::size_t>(N) + 1 : opt.quad_points;
    const FractionalRule quad_mu = kernel_rule(q, sp.mu, opt.lambda, opt.newton_polish);
    const FractionalRule quad_hat = integration_rule(q, opt.lambda, opt.newton_polish);
    out.nodal = solve(assemble(sp, out.grid, quad_mu, quad_hat));
    out.T = sp.T;
    return out;
}

inline CollocationSolution solve_vide(const VideProblem& p, int N, const SolverOptions& opt) {
    return solve_scaled(scale_to_unit(p), N, opt);
}

}  // namespace muntz
