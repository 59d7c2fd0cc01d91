#pragma once

#include <cmath>

#include "sgmimo/core/errors.hpp"
#include "sgmimo/numerics/quadrature.hpp"

namespace sgmimo {

/// True when p is a non-negative integer (to 1e-12).
inline bool is_whole(double p) { return p >= 0.0 && std::abs(p - std::round(p)) < 1e-12; }

/// int_a^b s^p e^{-s} ds for p >= 0 and 0 <= a <= b.
///
/// Whole p uses the finite incomplete-gamma sum; other p (and very short
/// intervals, where that sum cancels) fall back to quadrature. The upper
/// limit is clipped where the integrand has decayed below double precision.
inline double gamma_segment(double p, double a, double b, const QuadratureConfig& cfg = {}) {
    if (p < 0.0) throw DomainError("gamma_segment needs p >= 0");
    if (a < 0.0 || b < a) throw DomainError("gamma_segment needs 0 <= a <= b");
    if (a == b) return 0.0;
    // s^p e^{-s} < 1e-20 * peak beyond this point.
    const double peak = std::max(a, p);
    const double clip = peak + 50.0 + 2.0 * p * std::log1p(p + 1.0);
    b = std::min(b, std::max(clip, a));
    if (b <= a) return 0.0;

    if (is_whole(p) && b - a > 0.05) {
        const int m = static_cast<int>(std::round(p));
        // m! * (e^{-a} sum_{i<=m} a^i/i! - e^{-b} sum_{i<=m} b^i/i!)
        auto partial = [m](double x) {
            double term = 1.0, sum = 1.0;
            for (int i = 1; i <= m; ++i) {
                term *= x / i;
                sum += term;
            }
            return std::exp(-x) * sum;
        };
        return std::tgamma(m + 1.0) * (partial(a) - partial(b));
    }
    auto f = [p](double s) { return std::pow(s, p) * std::exp(-s); };
    return integrate(f, a, b, cfg, "incomplete gamma segment").value;
}

/// E[S^p] for S with density proportional to e^{-s} on (a, b), b may be
/// infinite. Written in the shifted variable w = s - a so that neither
/// e^{-a} nor e^{-b} is ever formed.
inline double truncated_moment(double p, double a, double b, const QuadratureConfig& cfg = {}) {
    if (p < 0.0) throw DomainError("truncated_moment needs p >= 0");
    if (a < 0.0 || !(b > a)) throw DomainError("truncated_moment needs 0 <= a < b");
    if (p == 0.0) return 1.0;
    const double clip = 50.0 + 2.0 * p * std::log1p(p + a + 1.0);
    const double len = std::min(b - a, clip);
    const double norm = -std::expm1(-len);

    if (is_whole(p) && len > 0.05) {
        const int m = static_cast<int>(std::round(p));
        auto series = [m](double x) {
            double term = 1.0, sum = 1.0;
            for (int i = 1; i <= m; ++i) {
                term *= x / i;
                sum += term;
            }
            return sum;
        };
        const double tail = len < clip ? std::exp(-len) * series(a + len) : 0.0;
        return std::tgamma(m + 1.0) * (series(a) - tail) / norm;
    }
    auto f = [p, a](double w) { return std::pow(a + w, p) * std::exp(-w); };
    return integrate(f, 0.0, len, cfg, "truncated moment").value / norm;
}

} // namespace sgmimo
