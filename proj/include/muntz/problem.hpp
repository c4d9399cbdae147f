#pragma once

// Weakly singular Volterra integro-differential equations with a
// proportional delay,
//
//   y'(t) = a1(t) y(t) + b1(t) y(eps t) + f1(t)
//           + int_0^t       (t - s)^-mu       K1(t, s)   y(s)   ds
//           + int_0^{eps t} (eps t - tau)^-mu K2(t, tau) y(tau) dtau,
//   y(0)  = y0,  t in [0, T],
//
// their rescaling to [0,1], the bundled test problems and a manufactured
// forcing oracle.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "muntz/quadrature.hpp"
#include "muntz/specfun.hpp"

namespace muntz {

using ScalarFn = std::function<double(double)>;
using KernelFn = std::function<double(double, double)>;

struct ExactSolution {
    ScalarFn y;
    ScalarFn dy;
};

struct VideProblem {
    std::string name;
    ScalarFn a1;
    ScalarFn b1;
    ScalarFn f1;
    KernelFn K1;  // K1(t, s)
    KernelFn K2;  // K2(t, tau), tau in [0, eps t]
    double mu = 0.0;
    double eps = 0.5;
    double T = 1.0;
    double y0 = 0.0;
    std::optional<ExactSolution> exact;

    void validate() const {
        if (!(mu >= 0.0 && mu < 1.0)) throw DomainError("VideProblem: mu must lie in [0,1)");
        if (!(eps > 0.0 && eps < 1.0)) throw DomainError("VideProblem: eps must lie in (0,1)");
        if (!(T > 0.0)) throw DomainError("VideProblem: T must be positive");
        if (!a1 || !b1 || !f1 || !K1 || !K2) throw std::invalid_argument("VideProblem: missing coefficient function");
    }
};

/// The problem after t = T theta, s = T eta. kbar2 is called as kbar2(theta, eps*eta).
struct ScaledProblem {
    ScalarFn a;   // T a1(T theta)
    ScalarFn b;   // T b1(T theta)
    ScalarFn f;   // T f1(T theta)
    KernelFn kbar1;  // T^(2-mu) K1(T theta, T eta)
    KernelFn kbar2;  // eps^(1-mu) T^(2-mu) K2(T theta, T sigma)
    double mu = 0.0;
    double eps = 0.5;
    double T = 1.0;
    double phi0 = 0.0;
    std::optional<ExactSolution> exact;  // phi(theta) = y(T theta), phi'(theta) = T y'(T theta)
};

inline ScaledProblem scale_to_unit(const VideProblem& p) {
    p.validate();
    ScaledProblem s;
    const double T = p.T;
    const double k1_scale = std::pow(T, 2.0 - p.mu);
    const double k2_scale = std::pow(p.eps, 1.0 - p.mu) * k1_scale;
    s.a = [a1 = p.a1, T](double th) { return T * a1(T * th); };
    s.b = [b1 = p.b1, T](double th) { return T * b1(T * th); };
    s.f = [f1 = p.f1, T](double th) { return T * f1(T * th); };
    s.kbar1 = [K1 = p.K1, T, k1_scale](double th, double eta) { return k1_scale * K1(T * th, T * eta); };
    s.kbar2 = [K2 = p.K2, T, k2_scale](double th, double sigma) { return k2_scale * K2(T * th, T * sigma); };
    s.mu = p.mu;
    s.eps = p.eps;
    s.T = T;
    s.phi0 = p.y0;
    if (p.exact) {
        s.exact = ExactSolution{
            [y = p.exact->y, T](double th) { return y(T * th); },
            [dy = p.exact->dy, T](double th) { return T * dy(T * th); },
        };
    }
    return s;
}

/// lambda = 1/q for mu = p/q (smallest q up to 12); 1 when mu = 0 or no small q fits.
inline double recommended_lambda(double mu) {
    if (mu == 0.0) return 1.0;
    for (int q = 1; q <= 12; ++q) {
        const double pq = mu * q;
        if (std::fabs(pq - std::round(pq)) < 1e-9) return 1.0 / q;
    }
    return 1.0;
}

// ---------------------------------------------------------------------------
// Weakly singular integrals int_0^U (U - s)^-mu g(s) ds

/// Product-Gauss route: s = U xi^(1/lambda), with `rule` the Gauss-Jacobi rule
/// for (1-xi)^-mu xi^(1/lambda - 1) on [0,1].
inline double weakly_singular_integral(const std::function<double(double)>& g, double upper, double mu,
                                       double lambda, const FractionalRule& rule) {
    if (upper == 0.0) return 0.0;
    const double p = 1.0 / lambda;
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        const double xi = rule.nodes[k];
        sum += singular_ratio(xi, lambda, mu) * g(upper * std::pow(xi, p)) * rule.weights[k];
    }
    return std::pow(upper, 1.0 - mu) / lambda * sum;
}

namespace detail {

/// Globally adaptive 15/31-point Gauss-Kronrod on [a,b]: the interval with the
/// largest error estimate is bisected until the summed estimate drops below
/// abs_tol or max_intervals is reached.
template <class F>
double adaptive_gauss_kronrod(const F& f, double a, double b, double abs_tol, std::size_t max_intervals = 4000) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    struct Piece {
        double a, b, value, error;
        bool operator<(const Piece& o) const { return error < o.error; }
    };
    auto eval = [&](double lo, double hi) {
        double err = 0.0;
        const double v = GK::integrate(f, lo, hi, 0, 0.0, &err);
        return Piece{lo, hi, v, err};
    };
    std::priority_queue<Piece> heap;
    heap.push(eval(a, b));
    double value = heap.top().value;
    double error = heap.top().error;
    while (error > abs_tol && heap.size() < max_intervals) {
        const Piece worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(Piece{worst.a, worst.b, worst.value, 0.0});
            error -= worst.error;
            continue;
        }
        const Piece left = eval(worst.a, mid);
        const Piece right = eval(mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Recompute the sum to shed accumulated update roundoff.
    value = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        heap.pop();
    }
    return value;
}

}  // namespace detail

/// Adaptive route: U - s = U u^(1/(1-mu)) turns the integral into
/// U^(1-mu)/(1-mu) int_0^1 g(s(u)) du, which is integrated by globally
/// adaptive Gauss-Kronrod bisection to absolute tolerance `tol`.
inline double weakly_singular_integral_adaptive(const std::function<double(double)>& g, double upper, double mu,
                                                double tol = 1e-13) {
    if (upper == 0.0) return 0.0;
    const double q = 1.0 / (1.0 - mu);
    auto integrand = [&](double u) {
        const double frac = u <= 0.0 ? 1.0 : -std::expm1(q * std::log(u));  // 1 - u^q
        return g(upper * frac);
    };
    const double scale = std::pow(upper, 1.0 - mu) / (1.0 - mu);
    return scale * detail::adaptive_gauss_kronrod(integrand, 0.0, 1.0, tol / std::max(scale, 1e-300));
}

// ---------------------------------------------------------------------------
// Manufactured forcing

/// f1(t) = y'(t) - a1 y(t) - b1 y(eps t) - (K1 y)(t) - (K2 y)(t) for a prescribed y.
class ManufacturedForcing {
public:
    static constexpr double kRouteAgreement = 1e-9;

    ManufacturedForcing(ExactSolution exact, const VideProblem& skeleton, double lambda_hat,
                        std::size_t points = 200)
        : state_(std::make_shared<State>()) {
        state_->exact = std::move(exact);
        state_->a1 = skeleton.a1;
        state_->b1 = skeleton.b1;
        state_->K1 = skeleton.K1;
        state_->K2 = skeleton.K2;
        state_->mu = skeleton.mu;
        state_->eps = skeleton.eps;
        state_->lambda_hat = lambda_hat;
        state_->rule = gauss_jacobi_unit(points, -skeleton.mu, 1.0 / lambda_hat - 1.0);
    }

    double operator()(double t) const { return evaluate(t, false); }

    double adaptive(double t) const { return evaluate(t, true); }

    /// Evaluates both routes; throws ConvergenceError if they disagree by more than 1e-9.
    double checked(double t) const {
        const double primary = evaluate(t, false);
        const double other = evaluate(t, true);
        if (!(std::fabs(primary - other) <= kRouteAgreement)) {
            throw ConvergenceError("manufactured forcing: quadrature routes disagree at t=" + std::to_string(t) +
                                   " (" + std::to_string(primary) + " vs " + std::to_string(other) + ")");
        }
        return primary;
    }

private:
    struct State {
        ExactSolution exact;
        ScalarFn a1, b1;
        KernelFn K1, K2;
        double mu = 0.0;
        double eps = 0.5;
        double lambda_hat = 1.0;
        FractionalRule rule;
    };

    double evaluate(double t, bool adaptive_route) const {
        const State& s = *state_;
        const auto& y = s.exact.y;
        auto g1 = [&](double sv) { return s.K1(t, sv) * y(sv); };
        auto g2 = [&](double tau) { return s.K2(t, tau) * y(tau); };
        double k1 = 0.0;
        double k2 = 0.0;
        if (adaptive_route) {
            k1 = weakly_singular_integral_adaptive(g1, t, s.mu);
            k2 = weakly_singular_integral_adaptive(g2, s.eps * t, s.mu);
        } else {
            k1 = weakly_singular_integral(g1, t, s.mu, s.lambda_hat, s.rule);
            k2 = weakly_singular_integral(g2, s.eps * t, s.mu, s.lambda_hat, s.rule);
        }
        return s.exact.dy(t) - s.a1(t) * y(t) - s.b1(t) * y(s.eps * t) - k1 - k2;
    }

    std::shared_ptr<State> state_;
};

inline ManufacturedForcing manufactured_forcing(ExactSolution exact, const VideProblem& skeleton,
                                                double lambda_hat, std::size_t points = 200) {
    return ManufacturedForcing(std::move(exact), skeleton, lambda_hat, points);
}

/// Residual of the rescaled equation for its exact solution, with both
/// integrals evaluated by the adaptive route.
inline double equation_residual(const ScaledProblem& sp, double theta) {
    if (!sp.exact) throw std::invalid_argument("equation_residual: problem has no exact solution");
    const auto& phi = sp.exact->y;
    const double eps = sp.eps;
    auto g1 = [&](double eta) { return sp.kbar1(theta, eta) * phi(eta); };
    auto g2 = [&](double eta) { return sp.kbar2(theta, eps * eta) * phi(eps * eta); };
    const double k1 = weakly_singular_integral_adaptive(g1, theta, sp.mu);
    const double k2 = weakly_singular_integral_adaptive(g2, theta, sp.mu);
    return sp.exact->dy(theta) -
           (sp.a(theta) * phi(theta) + sp.b(theta) * phi(eps * theta) + sp.f(theta) + k1 + k2);
}

// ---------------------------------------------------------------------------
// Bundled problems

enum class ForcingVariant { Corrected, Printed };

struct ExampleParams {
    std::optional<double> mu;
    std::optional<double> eps;
    std::optional<double> T;
    std::optional<double> y0;  // only honoured by problems without an exact solution
};

struct ExampleEntry {
    VideProblem problem;        // forcing = manufactured (corrected) where an exact solution exists
    ScalarFn printed_f1;        // published closed form, kept for comparison runs
    double recommended_lambda = 1.0;
};

namespace detail {

inline ExampleEntry finish_manufactured(VideProblem p, ScalarFn printed) {
    const double lam = recommended_lambda(p.mu);
    p.f1 = manufactured_forcing(*p.exact, p, lam);
    p.y0 = p.exact->y(0.0);
    return ExampleEntry{std::move(p), std::move(printed), lam};
}

// y(t) = t exp(-t^(1-mu)), kernels -exp(s^(1-mu)) and exp(tau^(1-mu)).
inline ExampleEntry example_5_1(const ExampleParams& prm) {
    VideProblem p;
    p.name = "5.1";
    p.mu = prm.mu.value_or(0.5);
    p.eps = prm.eps.value_or(0.5);
    p.T = prm.T.value_or(1.0);
    const double mu = p.mu;
    const double eps = p.eps;
    p.a1 = [](double) { return -1.0; };
    p.b1 = [](double) { return 1.0; };
    p.K1 = [mu](double, double s) { return -std::exp(std::pow(s, 1.0 - mu)); };
    p.K2 = [mu](double, double tau) { return std::exp(std::pow(tau, 1.0 - mu)); };
    p.exact = ExactSolution{
        [mu](double t) { return t * std::exp(-std::pow(t, 1.0 - mu)); },
        [mu](double t) {
            const double tp = std::pow(t, 1.0 - mu);
            return (1.0 - (1.0 - mu) * tp) * std::exp(-tp);
        },
    };
    const double B = beta(1.0 - mu, 2.0);
    ScalarFn printed = [mu, eps, B](double t) {
        const double tp = std::pow(t, 1.0 - mu);
        const double et = eps * t;
        return (1.0 - (1.0 - mu) * tp + t) * std::exp(-tp) + (1.0 + std::exp(2.0 - mu)) * B * std::pow(t, 2.0 - mu) -
               et * std::exp(-std::pow(et, 1.0 - mu));
    };
    return finish_manufactured(std::move(p), std::move(printed));
}

// y(t) = t^(2-mu) exp(-t), kernels -exp(s) and exp(tau).
inline ExampleEntry example_5_2(const ExampleParams& prm) {
    VideProblem p;
    p.name = "5.2";
    p.mu = prm.mu.value_or(1.0 / 3.0);
    p.eps = prm.eps.value_or(0.6);
    p.T = prm.T.value_or(0.5);
    const double mu = p.mu;
    const double eps = p.eps;
    p.a1 = [](double) { return -1.0; };
    p.b1 = [](double) { return 1.0; };
    p.K1 = [](double, double s) { return -std::exp(s); };
    p.K2 = [](double, double tau) { return std::exp(tau); };
    p.exact = ExactSolution{
        [mu](double t) { return std::pow(t, 2.0 - mu) * std::exp(-t); },
        [mu](double t) { return ((2.0 - mu) * std::pow(t, 1.0 - mu) - std::pow(t, 2.0 - mu)) * std::exp(-t); },
    };
    const double B = beta(1.0 - mu, 3.0 - mu);
    ScalarFn printed = [mu, eps, B](double t) {
        const double et = eps * t;
        return (2.0 - mu) * std::pow(t, 1.0 - mu) * std::exp(-t) +
               B * std::pow(t, 3.0 - 2.0 * mu) * (1.0 + std::exp(3.0 - 2.0 * mu)) -
               std::pow(et, 2.0 - mu) * std::exp(-et);
    };
    return finish_manufactured(std::move(p), std::move(printed));
}

// y(t) = (t^(1+w1) + t^(1+w2)) exp(-t), w1 = 1/2, w2 = sqrt 2, kernels of 5.2.
inline ExampleEntry example_5_3(const ExampleParams& prm) {
    VideProblem p;
    p.name = "5.3";
    p.mu = prm.mu.value_or(0.5);
    p.eps = prm.eps.value_or(0.5);
    p.T = prm.T.value_or(1.0);
    const double mu = p.mu;
    const double eps = p.eps;
    constexpr double w1 = 0.5;
    constexpr double w2 = std::numbers::sqrt2;
    p.a1 = [](double) { return -1.0; };
    p.b1 = [](double) { return 1.0; };
    p.K1 = [](double, double s) { return -std::exp(s); };
    p.K2 = [](double, double tau) { return std::exp(tau); };
    p.exact = ExactSolution{
        [](double t) { return (std::pow(t, 1.0 + w1) + std::pow(t, 1.0 + w2)) * std::exp(-t); },
        [](double t) {
            return std::exp(-t) * (std::pow(t, w1) * (1.0 + w1 - t) + std::pow(t, w2) * (1.0 + w2 - t));
        },
    };
    const double B1 = beta(1.0 - mu, w1 + 2.0);
    const double B2 = beta(1.0 - mu, w2 + 2.0);
    ScalarFn printed = [mu, eps, B1, B2](double t) {
        const double et = eps * t;
        return std::exp(-t) * (std::pow(t, w1) * (1.0 + w1 - t) + std::pow(t, w2) * (1.0 + w2 - t)) +
               (std::pow(t, 1.0 + w1) + std::pow(t, 1.0 + w2)) * std::exp(-t) -
               (std::pow(et, 1.0 + w1) + std::pow(et, 1.0 + w2)) * std::exp(-et) -
               B1 * std::pow(t, 2.0 - mu + w1) * (std::exp(2.0 - mu + w1) + 1.0) -
               B2 * std::pow(t, 2.0 - mu + w2) * (std::exp(2.0 - mu + w2) + 1.0);
    };
    return finish_manufactured(std::move(p), std::move(printed));
}

// No closed-form solution; compared against a high-N reference.
inline ExampleEntry example_5_4(const ExampleParams& prm) {
    VideProblem p;
    p.name = "5.4";
    p.mu = prm.mu.value_or(0.5);
    p.eps = prm.eps.value_or(0.5);
    p.T = prm.T.value_or(0.5);
    p.y0 = prm.y0.value_or(3.0);
    p.a1 = [](double t) { return std::cos(t); };
    p.b1 = [](double t) { return std::exp(-t); };
    p.f1 = [](double t) { return std::sin(2.0 * t); };
    p.K1 = [](double t, double s) { return -(1.0 + std::sin(t * s)); };
    p.K2 = [](double t, double tau) { return -(1.0 + std::cos(t * tau)); };
    ScalarFn printed = p.f1;
    const double lam = recommended_lambda(p.mu);
    return ExampleEntry{std::move(p), std::move(printed), lam};
}

}  // namespace detail

inline ExampleEntry make_example(const std::string& id, const ExampleParams& params = {}) {
    if (id == "5.1") return detail::example_5_1(params);
    if (id == "5.2") return detail::example_5_2(params);
    if (id == "5.3") return detail::example_5_3(params);
    if (id == "5.4") return detail::example_5_4(params);
    throw std::invalid_argument("unknown example id '" + id + "'");
}

/// The problem with the requested forcing installed.
inline VideProblem example_problem(const std::string& id, const ExampleParams& params = {},
                                   ForcingVariant variant = ForcingVariant::Corrected) {
    ExampleEntry e = make_example(id, params);
    if (variant == ForcingVariant::Printed) e.problem.f1 = e.printed_f1;
    return e.problem;
}

inline std::map<std::string, ExampleEntry> register_examples(const ExampleParams& params = {}) {
    std::map<std::string, ExampleEntry> reg;
    for (const char* id : {"5.1", "5.2", "5.3", "5.4"}) reg.emplace(id, make_example(id, params));
    return reg;
}

}  // namespace muntz
