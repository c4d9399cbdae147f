#pragma once

// Log-gamma and Beta for the Jacobi normalisations and the closed-form
// forcing terms of the bundled examples.

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace muntz {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// ln Gamma(x) for x > 0.
inline double ln_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("ln_gamma: argument must be positive and finite, got " + std::to_string(x));
    }
    return boost::math::lgamma(x);
}

/// B(a,b) = Gamma(a)Gamma(b)/Gamma(a+b), evaluated in log space.
inline double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DomainError("beta: arguments must be positive");
    }
    return std::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
}

}  // namespace muntz
