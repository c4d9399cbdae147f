#pragma once

// Classical Jacobi polynomials, Gauss-Jacobi rules on [-1,1] and their
// fractional images on [0,1].

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "muntz/specfun.hpp"

namespace muntz {

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1,1].
struct QuadratureRule {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> nodes;    // strictly increasing, inside (-1,1)
    std::vector<double> weights;  // positive

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// Rule on [0,1] for the weight lambda (1-theta^lambda)^alpha theta^((beta+1)lambda-1).
/// With lambda = 1 this is the affine image (1-theta)^alpha theta^beta.
struct FractionalRule {
    double lambda = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

inline void check_jacobi_params(double alpha, double beta, const char* who) {
    if (!(alpha > -1.0) || !(beta > -1.0)) {
        throw DomainError(std::string(who) + ": Jacobi exponents must exceed -1");
    }
}

/// 2^(alpha+beta+1) B(alpha+1, beta+1), the total mass of the Jacobi weight.
inline double jacobi_mass(double alpha, double beta) {
    return std::exp((alpha + beta + 1.0) * std::log(2.0) + ln_gamma(alpha + 1.0) +
                    ln_gamma(beta + 1.0) - ln_gamma(alpha + beta + 2.0));
}

/// Diagonal and squared off-diagonal entries of the monic Jacobi recurrence.
inline void jacobi_recurrence(std::size_t n, double alpha, double beta,
                              std::vector<double>& diag, std::vector<double>& offdiag_sq) {
    diag.assign(n, 0.0);
    offdiag_sq.assign(n, 0.0);
    const double ab = alpha + beta;
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double s = 2.0 * kk + ab;
        diag[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        if (k == 1) {
            // (1+alpha+beta) cancels between numerator and denominator.
            offdiag_sq[k] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        } else {
            offdiag_sq[k] = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab) /
                            (s * s * (s + 1.0) * (s - 1.0));
        }
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. On return `d` holds
/// eigenvalues and `z` the first component of each normalised eigenvector.
/// `e[i]` couples rows i and i+1; e.back() is ignored.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z,
                           int max_sweeps = 50) {
    const std::size_t n = d.size();
    z.assign(n, 0.0);
    z[0] = 1.0;
    if (n == 1) return;
    e[n - 1] = 0.0;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == max_sweeps) {
                    throw ConvergenceError("tridiagonal_ql: no convergence after " +
                                           std::to_string(max_sweeps) + " sweeps");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace detail

/// J_n^{alpha,beta}(x) by the three-term recurrence (standard normalisation,
/// J_n(1) = Gamma(n+alpha+1) / (n! Gamma(alpha+1))).
inline double jacobi_eval(int n, double alpha, double beta, double x) {
    if (n < 0) throw DomainError("jacobi_eval: negative degree");
    if (n == 0) return 1.0;
    const double ab = alpha + beta;
    double p_prev = 1.0;
    double p = (alpha + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    for (int k = 2; k <= n; ++k) {
        const double kk = k;
        const double s = 2.0 * kk + ab;
        const double a1 = 2.0 * kk * (kk + ab) * (s - 2.0);
        const double a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        const double a3 = (s - 2.0) * (s - 1.0) * s;
        const double a4 = 2.0 * (kk + alpha - 1.0) * (kk + beta - 1.0) * s;
        const double p_next = ((a2 + a3 * x) * p - a4 * p_prev) / a1;
        p_prev = p;
        p = p_next;
    }
    return p;
}

/// d/dx J_n^{alpha,beta}(x) = (n+alpha+beta+1)/2 * J_{n-1}^{alpha+1,beta+1}(x).
inline double jacobi_deriv(int n, double alpha, double beta, double x) {
    if (n <= 0) return 0.0;
    return 0.5 * (n + alpha + beta + 1.0) * jacobi_eval(n - 1, alpha + 1.0, beta + 1.0, x);
}

/// npts-point Gauss-Jacobi rule (Golub-Welsch, then Newton polish of the nodes).
inline QuadratureRule gauss_jacobi(std::size_t npts, double alpha, double beta, bool newton_polish = true) {
    if (npts < 1) throw DomainError("gauss_jacobi: need at least one point");
    detail::check_jacobi_params(alpha, beta, "gauss_jacobi");

    std::vector<double> d;
    std::vector<double> b2;
    detail::jacobi_recurrence(npts, alpha, beta, d, b2);
    std::vector<double> e(npts, 0.0);
    for (std::size_t k = 0; k + 1 < npts; ++k) e[k] = std::sqrt(b2[k + 1]);

    std::vector<double> z;
    detail::tridiagonal_ql(d, e, z);

    const double mass = detail::jacobi_mass(alpha, beta);
    std::vector<std::size_t> order(npts);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });

    QuadratureRule rule;
    rule.alpha = alpha;
    rule.beta = beta;
    rule.nodes.resize(npts);
    rule.weights.resize(npts);
    const int n = static_cast<int>(npts);
    for (std::size_t k = 0; k < npts; ++k) {
        double x = d[order[k]];
        if (newton_polish) {
            for (int it = 0; it < 4; ++it) {
                const double dp = jacobi_deriv(n, alpha, beta, x);
                if (dp == 0.0 || !std::isfinite(dp)) break;
                const double step = jacobi_eval(n, alpha, beta, x) / dp;
                const double next = x - step;
                // Reject a step that leaves the interval or jumps to a neighbouring root.
                if (!(std::fabs(step) < 1e-6) || next <= -1.0 || next >= 1.0) break;
                x = next;
                if (std::fabs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(x)) break;
            }
        }
        rule.nodes[k] = x;
        rule.weights[k] = mass * z[order[k]] * z[order[k]];
    }
    return rule;
}

/// Map a rule on [-1,1] to [0,1] via theta = ((t+1)/2)^(1/lambda) and
/// rescale the weights by 2^-(alpha+beta+1).
inline FractionalRule to_fractional(const QuadratureRule& rule, double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0) throw DomainError("to_fractional: lambda must lie in (0,1]");
    FractionalRule out;
    out.lambda = lambda;
    out.alpha = rule.alpha;
    out.beta = rule.beta;
    out.nodes.resize(rule.size());
    out.weights.resize(rule.size());
    const double scale = std::exp2(-(rule.alpha + rule.beta + 1.0));
    for (std::size_t j = 0; j < rule.size(); ++j) {
        const double z = 0.5 * (rule.nodes[j] + 1.0);
        out.nodes[j] = lambda == 1.0 ? z : std::pow(z, 1.0 / lambda);
        out.weights[j] = scale * rule.weights[j];
    }
    return out;
}

/// Gauss-Jacobi rule for (1-xi)^alpha xi^beta on [0,1].
inline FractionalRule gauss_jacobi_unit(std::size_t npts, double alpha, double beta, bool newton_polish = true) {
    return to_fractional(gauss_jacobi(npts, alpha, beta, newton_polish), 1.0);
}

/// The fractional Jacobi weight lambda (1-theta^lambda)^alpha theta^((beta+1)lambda-1).
inline double muntz_weight(double theta, double alpha, double beta, double lambda) {
    return lambda * std::pow(1.0 - std::pow(theta, lambda), alpha) *
           std::pow(theta, (beta + 1.0) * lambda - 1.0);
}

/// ((1 - xi^(1/lambda)) / (1 - xi))^(-mu) for xi in [0,1). Tends to lambda^mu as xi -> 1.
inline double singular_ratio(double xi, double lambda, double mu) {
    if (mu == 0.0 || lambda == 1.0) return 1.0;
    const double p = 1.0 / lambda;
    const double delta = 1.0 - xi;
    double log_ratio = 0.0;
    if (delta < 1e-8) {
        // (1-(1-delta)^p)/delta = p (1 - (p-1)/2 delta + (p-1)(p-2)/6 delta^2 - ...)
        const double series = 1.0 - 0.5 * (p - 1.0) * delta + (p - 1.0) * (p - 2.0) / 6.0 * delta * delta;
        log_ratio = std::log(p) + std::log(series);
    } else {
        const double one_minus_pow = -std::expm1(p * std::log(xi));
        log_ratio = std::log(one_minus_pow) - std::log1p(-xi);
    }
    return std::exp(-mu * log_ratio);
}

}  // namespace muntz
