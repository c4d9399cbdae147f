#pragma once

// Test-only reference computations. Nothing here calls into the solver's
// quadrature or basis code.

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using hp = boost::multiprecision::cpp_bin_float_50;

/// int_{-1}^{1} (1-x)^a (1+x)^b x^k dx by binomial expansion of x = 2u-1 and
/// Beta moments, evaluated in 50-digit arithmetic.
inline double jacobi_moment(double a, double b, int k) {
    const hp A(a), B(b);
    hp sum = 0;
    for (int m = 0; m <= k; ++m) {
        const hp binom = boost::math::binomial_coefficient<hp>(static_cast<unsigned>(k), static_cast<unsigned>(m));
        const hp sign = ((k - m) % 2 == 0) ? hp(1) : hp(-1);
        sum += binom * pow(hp(2), m) * sign * boost::math::beta(B + m + 1, A + 1);
    }
    return static_cast<double>(pow(hp(2), A + B + 1) * sum);
}

/// B(a,b) in 50-digit arithmetic.
inline double beta_hp(double a, double b) { return static_cast<double>(boost::math::beta(hp(a), hp(b))); }

/// Explicit Gamma-sum form of J_n^{a,b}(x), reliable for small n only.
inline double jacobi_gamma_sum(int n, double a, double b, double x) {
    using boost::math::tgamma;
    const hp A(a), B(b), X(x);
    hp sum = 0;
    for (int k = 0; k <= n; ++k) {
        const hp binom = boost::math::binomial_coefficient<hp>(static_cast<unsigned>(n), static_cast<unsigned>(k));
        hp rising = 1;  // Gamma(n+k+a+b+1) / Gamma(n+a+b+1)
        for (int m = 0; m < k; ++m) rising *= hp(n + m) + A + B + 1;
        sum += binom * rising / tgamma(hp(k) + A + 1) * pow((X - 1) / 2, k);
    }
    const hp pre = tgamma(hp(n) + A + 1) / boost::math::factorial<hp>(static_cast<unsigned>(n));
    return static_cast<double>(pre * sum);
}

/// Hand-derived forcing of the first bundled problem:
/// (1-(1-mu)t^(1-mu)+t) e^(-t^(1-mu)) + B(1-mu,2) t^(2-mu) (1-eps^(2-mu)) - eps t e^(-(eps t)^(1-mu)).
inline double forcing_5_1(double t, double mu, double eps) {
    const double tp = std::pow(t, 1.0 - mu);
    const double B = beta_hp(1.0 - mu, 2.0);
    return (1.0 - (1.0 - mu) * tp + t) * std::exp(-tp) + B * std::pow(t, 2.0 - mu) * (1.0 - std::pow(eps, 2.0 - mu)) -
           eps * t * std::exp(-std::pow(eps * t, 1.0 - mu));
}

/// Central finite difference.
inline double central_difference(const std::function<double(double)>& f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace oracle
