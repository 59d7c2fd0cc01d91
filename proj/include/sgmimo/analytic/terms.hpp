#pragma once

#include <cmath>
#include <numbers>
#include <sstream>

#include "sgmimo/core/errors.hpp"
#include "sgmimo/core/params.hpp"
#include "sgmimo/link/estimation.hpp"
#include "sgmimo/numerics/quadrature.hpp"
#include "sgmimo/numerics/special.hpp"

namespace sgmimo {

// Scaled variables used by every integral below: t = pi lambda r^2 for a
// base-station distance and s = pi lambda r_jjk^2 for a serving distance.
inline double scaled_area(const SystemParams& p, double r) { return std::numbers::pi * p.lambda * r * r; }

/// Mean of sum_j r_jjk^(alpha eps) r_ljk^(-alpha) over the co-pilot users of
/// the other cells, with the interfering BSs outside the exclusion ball:
///   (pi lambda)^(alpha (1-eps)/2) int_{pi lambda R_e^2}^inf t^(-alpha/2) E[s^(alpha eps/2) | s < t] dt.
inline double contamination_mean(const SystemParams& p, const QuadratureConfig& cfg = {}) {
    const double half = p.alpha / 2.0;
    const double power = p.alpha * p.eps / 2.0;
    const double a = scaled_area(p, p.r0);
    const double te = scaled_area(p, p.r_e);
    const QuadratureConfig inner = cfg.nested();
    auto f = [&](double t) { return std::pow(t, -half) * truncated_moment(power, a, t, inner); };
    const double integral = integrate_to_infinity(f, te, cfg, "contamination mean").value;
    return std::pow(std::numbers::pi * p.lambda, half * (1.0 - p.eps)) * integral;
}

/// Mean aggregate r_lj^(-alpha) over base stations outside the exclusion ball.
inline double q2(const SystemParams& p) {
    if (!(p.alpha > 2.0)) throw DomainError("Q2 diverges for alpha <= 2");
    if (p.mode == Mode::synchronous) return 0.0;
    return 2.0 * std::pow(p.r_e, -p.alpha) / (p.alpha - 2.0);
}

/// Mean of Delta^(1). The conditioning on the serving distance is dropped,
/// so the value does not depend on x; x is only checked.
inline double q1(double x, const SystemParams& p, const QuadratureConfig& cfg = {}) {
    if (!(x > p.r0)) throw DomainError("Q1 needs x > r0");
    const double j = contamination_mean(p, cfg);
    const double np = p.n_p();
    if (p.mode == Mode::synchronous) return j + p.sigma2 / (np * p.p_u * std::pow(p.omega, 1.0 - p.eps));
    const double ntot2 = p.n_tot() * p.n_tot();
    return f_variance(p.frame) * np * j +
           p.p_d * np * p.n_d() * q2(p) / (p.p_u * std::pow(p.omega, -p.eps) * ntot2) +
           p.sigma2 * std::pow(p.omega, p.eps - 1.0) / (np * p.p_u);
}

/// Mean of sum_j sum_k' r_jjk'^(alpha eps) r_lkjk'^(-alpha) over the users of
/// frame-offset neighbours.
///
/// The simplified form replaces the user-to-user distance by the BS-to-user
/// distance. The exact form integrates over the interfering BS position
/// (r, theta) around the tagged BS; the interfering user then sits at
/// r1 = |r e^{i theta} - x| from the tagged user, and its serving distance is
/// the truncated Rayleigh law on (max(r0, x - r1), x + r1). The exact form
/// diverges once the tagged user can sit on top of an interferer (x >= R_e).
inline double q3(double x, const SystemParams& p, bool exact = false, const QuadratureConfig& cfg = {}) {
    if (!(x > p.r0)) throw DomainError("Q3 needs x > r0");
    if (p.mode == Mode::synchronous) return 0.0;
    const double np = p.n_p();
    if (!exact) return np * contamination_mean(p, cfg);
    if (!(x < p.r_e)) {
        std::ostringstream os;
        os << "exact Q3 diverges for x >= R_e (x=" << x << ", R_e=" << p.r_e << ")";
        throw DomainError(os.str());
    }

    const double pl = std::numbers::pi * p.lambda;
    const double power = p.alpha * p.eps / 2.0;
    const QuadratureConfig mid = cfg.nested();
    const QuadratureConfig inner = mid.nested();
    auto ring = [&](double r) {
        auto angular = [&](double theta) {
            const double r1 = std::sqrt(std::max(r * r + x * x - 2.0 * r * x * std::cos(theta), 0.0));
            const double lo = std::max(p.r0, x - r1);
            const double hi = x + r1;
            const double moment = truncated_moment(power, pl * lo * lo, pl * hi * hi, inner);
            return std::pow(pl, -power) * moment * std::pow(r1, -p.alpha);
        };
        // The integrand is even in theta.
        return 2.0 * integrate(angular, 0.0, std::numbers::pi, mid, "exact Q3 angle").value * p.lambda * r;
    };
    return np * integrate_to_infinity(ring, p.r_e, cfg, "exact Q3 radius").value;
}

/// Deterministic part of the approximate SINR^-1 at serving distance x.
inline double c1(double x, const SystemParams& p, double q1v, double q2v, double q3v, const DerivedConstants& dc) {
    const double a = p.alpha, e = p.eps;
    const double c2 = dc.c_m * dc.c_m;
    const double np = p.n_p();
    const double ntot2 = p.n_tot() * p.n_tot();
    const double noise_d = p.sigma2 / (p.p_d * p.omega);
    const double lead = std::pow(x, a) + std::pow(x, a * (2.0 - e)) * q1v;
    return (dc.v_m - 1.0) / c2 + np / c2 + noise_d * std::pow(x, a) / c2 +
           p.sigma2 * std::pow(x, a * (1.0 - e)) / (p.p_u * c2 * std::pow(p.omega, 1.0 - e)) +
           p.sigma2 * p.sigma2 * std::pow(x, a * (2.0 - e)) / (np * p.p_u * p.p_d * c2 * std::pow(p.omega, 2.0 - e)) +
           lead * p.p_u * p.n_d() * (np + p.n_u()) / (p.p_d * std::pow(p.omega, e) * c2 * ntot2) * q3v +
           (np + noise_d * std::pow(x, a)) * p.p_d * np * p.n_d() * std::pow(x, a * (1.0 - e)) /
               (p.p_u * std::pow(p.omega, -e) * c2 * ntot2) * q2v;
}

/// Laplace-exponent coefficients; each is linear in eta n T and non-positive.
struct Coefficients {
    double b = 0.0; ///< multiplies r_jlk^(-alpha)
    double c = 0.0; ///< multiplies r_jlk^(-2 alpha)
    double d = 0.0; ///< multiplies r_jjk'^(alpha eps) r_ljk'^(-alpha)
};

inline Coefficients coefficients(double t, int n, double x, const SystemParams& p, double q1v,
                                 const DerivedConstants& dc) {
    if (t < 0.0) throw DomainError("threshold must be non-negative");
    if (n < 1) throw DomainError("Gamma index n must be >= 1");
    const double s = dc.eta * n * t;
    const double c2 = dc.c_m * dc.c_m;
    const double a = p.alpha;
    const double np = p.n_p();
    const double ntot2 = p.n_tot() * p.n_tot();
    const bool async = p.mode == Mode::asynchronous;

    Coefficients k;
    k.b = -s * np / c2 * (std::pow(x, a) + std::pow(x, a * (2.0 - p.eps)) * q1v);
    k.c = -s * (p.m - 1.0) / c2 * std::pow(x, 2.0 * a);
    k.d = -s / c2 * std::pow(x, a * (1.0 - p.eps)) * (np + p.sigma2 / (p.p_d * p.omega) * std::pow(x, a));
    if (async) {
        const double dd = p.n_d() * p.n_d() / ntot2;
        k.b *= dd;
        k.c *= np * dd * (np + p.n_u()) / ntot2;
        k.d *= f_variance(p.frame);
    }
    return k;
}

} // namespace sgmimo
