#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "sgmimo/core/errors.hpp"
#include "sgmimo/numerics/random.hpp"

namespace sgmimo {

/// Rayleigh-type law f(r) ∝ 2 pi lambda r exp(-pi lambda r^2) truncated to
/// (lo, hi); hi may be +inf.
///
/// This single family covers all three conditional serving-distance laws:
///   serving distance                      (r0, inf)
///   ... given another BS at distance r2   (r0, r2)
///   ... given a user pair (x, r)          (max(r0, x - r), x + r)
class TruncatedRayleigh {
  public:
    TruncatedRayleigh(double lambda, double lo, double hi) : lambda_(lambda), lo_(lo), hi_(hi) {
        if (!(lambda > 0.0)) throw DomainError("distance law needs lambda > 0");
        if (!(lo >= 0.0) || !(hi > lo)) throw DomainError("distance law needs 0 <= lo < hi");
        // Mass of (lo, hi) relative to exp(-pi lambda lo^2).
        span_ = std::isinf(hi) ? 1.0 : -std::expm1(-c() * (hi * hi - lo * lo));
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }

    double pdf(double r) const {
        if (!(r > lo_) || !(r < hi_)) return 0.0;
        return 2.0 * c() * r * std::exp(-c() * (r * r - lo_ * lo_)) / span_;
    }

    double cdf(double r) const {
        if (r <= lo_) return 0.0;
        if (r >= hi_) return 1.0;
        return -std::expm1(-c() * (r * r - lo_ * lo_)) / span_;
    }

    /// Closed-form inverse CDF.
    double quantile(double u) const {
        const double r2 = lo_ * lo_ - std::log1p(-u * span_) / c();
        return std::sqrt(r2);
    }

    double sample(Rng& rng) const { return quantile(rng.uniform()); }

  private:
    double c() const { return std::numbers::pi * lambda_; }

    double lambda_;
    double lo_;
    double hi_;
    double span_;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Serving distance, r > r0.
inline TruncatedRayleigh serving_law(double lambda, double r0) { return {lambda, r0, kInf}; }

/// Serving distance r1 given another BS at r2: r0 < r1 < r2.
inline TruncatedRayleigh serving_given_other_law(double lambda, double r0, double r2) {
    if (!(r2 > r0)) throw DomainError("conditioning distance r2 must exceed r0");
    return {lambda, r0, r2};
}

/// Serving distance of a user at distance r from a tagged user whose own
/// serving distance is x: max(r0, x - r) < s < x + r.
inline TruncatedRayleigh serving_given_user_pair_law(double lambda, double r0, double r, double x) {
    if (!(x > r0)) throw DomainError("tagged serving distance x must exceed r0");
    if (!(r > 0.0)) throw DomainError("user separation r must be positive");
    return {lambda, std::max(r0, x - r), x + r};
}

inline double pdf_serving(double r, double lambda, double r0) { return serving_law(lambda, r0).pdf(r); }

/// r = sqrt(r0^2 - ln(U) / (pi lambda)), U in (0, 1].
inline double sample_serving(double lambda, double r0, Rng& rng) {
    const double u = rng.uniform_pos();
    return std::sqrt(r0 * r0 - std::log(u) / (std::numbers::pi * lambda));
}

inline double pdf_serving_given_other(double r1, double r2, double lambda, double r0) {
    return serving_given_other_law(lambda, r0, r2).pdf(r1);
}
inline double sample_serving_given_other(double r2, double lambda, double r0, Rng& rng) {
    return serving_given_other_law(lambda, r0, r2).sample(rng);
}

inline double pdf_serving_given_user_pair(double s, double r, double x, double lambda, double r0) {
    return serving_given_user_pair_law(lambda, r0, r, x).pdf(s);
}
inline double sample_serving_given_user_pair(double r, double x, double lambda, double r0, Rng& rng) {
    return serving_given_user_pair_law(lambda, r0, r, x).sample(rng);
}

} // namespace sgmimo
