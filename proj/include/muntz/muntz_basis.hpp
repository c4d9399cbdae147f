#pragma once

// Fractional Jacobi-Gauss collocation grid and the generalised Lagrange basis
// F_j(theta) = prod_{i != j} (theta^lambda - theta_i^lambda) / (theta_j^lambda - theta_i^lambda).
//
// Everything is evaluated in z = theta^lambda, where F_j is an ordinary
// Lagrange polynomial, using the barycentric second form.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "muntz/quadrature.hpp"

namespace muntz {

struct CollocationGrid {
    int N = 0;
    double lambda = 1.0;
    double alpha = -0.5;
    double beta = -0.5;
    std::vector<double> points;              // theta_0 < ... < theta_N in (0,1)
    std::vector<double> z_points;            // theta_j^lambda
    std::vector<double> barycentric_weights; // 1 / prod_{i != j} 4 (z_j - z_i)

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

inline CollocationGrid build_grid(int N, double alpha, double beta, double lambda, bool newton_polish = true) {
    if (N < 1) throw DomainError("build_grid: N must be at least 1");
    if (!(lambda > 0.0) || lambda > 1.0) throw DomainError("build_grid: lambda must lie in (0,1]");
    const QuadratureRule rule = gauss_jacobi(static_cast<std::size_t>(N) + 1, alpha, beta, newton_polish);
    const FractionalRule frac = to_fractional(rule, lambda);

    CollocationGrid grid;
    grid.N = N;
    grid.lambda = lambda;
    grid.alpha = alpha;
    grid.beta = beta;
    grid.points = frac.nodes;
    grid.z_points.resize(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) grid.z_points[j] = 0.5 * (rule.nodes[j] + 1.0);

    // The factor 4 (inverse capacity of [0,1]) keeps the products O(1).
    const std::size_t n = grid.size();
    grid.barycentric_weights.assign(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        double prod = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) prod *= 4.0 * (grid.z_points[j] - grid.z_points[i]);
        }
        grid.barycentric_weights[j] = 1.0 / prod;
    }
    return grid;
}

namespace detail {

/// Index of the grid point coinciding with theta (to 1e-15), or -1.
inline int coincident_node(const CollocationGrid& grid, double theta, double z) {
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (std::fabs(theta - grid.points[k]) <= 1e-15 || z == grid.z_points[k]) return static_cast<int>(k);
    }
    return -1;
}

}  // namespace detail

/// All N+1 basis values F_j(theta).
inline void basis_eval_all(const CollocationGrid& grid, double theta, std::span<double> out) {
    const std::size_t n = grid.size();
    if (out.size() != n) throw std::invalid_argument("basis_eval_all: output span has wrong length");
    const double z = grid.lambda == 1.0 ? theta : std::pow(theta, grid.lambda);
    const int hit = detail::coincident_node(grid, theta, z);
    if (hit >= 0) {
        for (std::size_t k = 0; k < n; ++k) out[k] = (static_cast<int>(k) == hit) ? 1.0 : 0.0;
        return;
    }
    double denom = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = grid.barycentric_weights[k] / (z - grid.z_points[k]);
        denom += out[k];
    }
    for (std::size_t k = 0; k < n; ++k) out[k] /= denom;
}

inline std::vector<double> basis_eval_all(const CollocationGrid& grid, double theta) {
    std::vector<double> out(grid.size());
    basis_eval_all(grid, theta, out);
    return out;
}

inline double basis_eval(const CollocationGrid& grid, std::size_t j, double theta) {
    if (j >= grid.size()) throw std::out_of_range("basis_eval: basis index exceeds N");
    return basis_eval_all(grid, theta)[j];
}

/// Direct product form of F_j. Only used as a cross-check for small N.
inline double basis_eval_product(const CollocationGrid& grid, std::size_t j, double theta) {
    const double z = std::pow(theta, grid.lambda);
    double prod = 1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i != j) prod *= (z - grid.z_points[i]) / (grid.z_points[j] - grid.z_points[i]);
    }
    return prod;
}

/// I_{N,lambda} v(theta) = sum_j v(theta_j) F_j(theta).
inline double interpolate(const CollocationGrid& grid, std::span<const double> values, double theta) {
    if (values.size() != grid.size()) throw std::invalid_argument("interpolate: value count does not match grid");
    const double z = grid.lambda == 1.0 ? theta : std::pow(theta, grid.lambda);
    const int hit = detail::coincident_node(grid, theta, z);
    if (hit >= 0) return values[static_cast<std::size_t>(hit)];
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.barycentric_weights[k] / (z - grid.z_points[k]);
        num += t * values[k];
        den += t;
    }
    return num / den;
}

}  // namespace muntz
