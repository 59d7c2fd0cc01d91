#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "sgmimo/core/errors.hpp"
#include "sgmimo/core/params.hpp"

namespace sgmimo {

/// (1 - e^{-eta A})^N, the upper bound on the CDF of a unit-mean Gamma
/// variable with shape N. Exact for N = 1.
inline double gamma_cdf_approx(double a, int n) {
    if (a < 0.0) throw DomainError("Gamma CDF argument must be non-negative");
    return std::pow(-std::expm1(-eta(n) * a), n);
}

inline double binomial(int n, int k) {
    return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k)));
}

/// sum_{n=1}^N (-1)^{n+1} C(N, n) terms[n-1], accumulated left to right.
inline double alternating_sum(const std::vector<double>& terms) {
    const int n = static_cast<int>(terms.size());
    double sum = 0.0;
    for (int i = 1; i <= n; ++i) {
        const double sign = (i % 2 == 1) ? 1.0 : -1.0;
        sum += sign * binomial(n, i) * terms[static_cast<std::size_t>(i - 1)];
    }
    return sum;
}

/// Alternating sum of probability terms. The completed sum must stay within
/// [-2, 2]; anything else means the terms were not accurate enough to
/// survive the cancellation.
inline double alternating_gamma_sum(const std::vector<double>& terms) {
    const double sum = alternating_sum(terms);
    if (!(sum >= -2.0 && sum <= 2.0)) {
        std::ostringstream os;
        os << "alternating Gamma sum left [-2, 2] (N=" << terms.size() << ", value " << sum << ")";
        throw NumericalError(os.str());
    }
    return sum;
}

} // namespace sgmimo
