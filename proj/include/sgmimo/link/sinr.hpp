#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sgmimo/core/params.hpp"
#include "sgmimo/geometry/bundle.hpp"
#include "sgmimo/link/estimation.hpp"
#include "sgmimo/link/phases.hpp"

namespace sgmimo {

/// SINR^-1 = gamma1 + gamma2 + gamma3 for one tagged user, conditioned on
/// the large-scale geometry.
///   gamma1: intra-cell interference, noise, estimation quality
///   gamma2: pilot contamination (co-pilot downlink beams)
///   gamma3: neighbour users transmitting pilots/uplink data
struct InverseSinr {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma3 = 0.0;

    double total() const { return gamma1 + gamma2 + gamma3; }
    double sinr() const { return 1.0 / total(); }
};

namespace detail {
inline void require_finite(double v, const char* summand) {
    if (!std::isfinite(v)) throw NumericalError(std::string("non-finite SINR summand: ") + summand);
}
} // namespace detail

/// `deltas[c][k]` must hold Delta for every user of every cell of the
/// realization the bundle was taken from; `phases` is indexed by cell.
inline InverseSinr inverse_sinr(const DistanceBundle& b, const PhaseIndicators& phases,
                                const std::vector<std::vector<double>>& deltas, const SystemParams& p,
                                const DerivedConstants& dc) {
    const double a = p.alpha, e = p.eps, x = b.x;
    const double c2 = dc.c_m * dc.c_m;
    const double np = p.n_p();
    const double ntot2 = p.n_tot() * p.n_tot();
    const double noise_d = p.sigma2 / (p.p_d * p.omega); // sigma^2 / (P_d omega)
    const auto k = static_cast<std::size_t>(b.user);
    const bool sync = p.mode == Mode::synchronous;

    const double delta_lk = deltas[b.cell][k];
    const double d1 = delta1(delta_lk, x, p);
    const double lead = std::pow(x, a) + std::pow(x, a * (2.0 - e)) * d1;

    // Pilot-contamination bracket of gamma1.
    double bracket = 0.0;
    if (sync) {
        for (const auto& j : b.interferers)
            if (k < j.serving.size()) bracket += std::pow(j.serving[k], a * e) * std::pow(j.to_desired_bs[k], -a);
    } else {
        double users = 0.0, bs = 0.0;
        for (const auto& j : b.interferers) {
            for (std::size_t kk = 0; kk < j.serving.size(); ++kk)
                users += std::pow(j.serving[kk], a * e) * std::pow(j.to_desired_bs[kk], -a);
            bs += std::pow(j.bs_to_bs, -a);
        }
        bracket = (np + p.n_u()) / ntot2 * users +
                  p.p_d * np * p.n_d() / (p.p_u * std::pow(p.omega, -e) * ntot2) * bs;
    }

    InverseSinr g;
    const double s1 = (dc.v_m - 1.0) / c2;
    const double s2 = np / c2;
    const double s3 = noise_d * std::pow(x, a) / c2;
    const double s4 = p.sigma2 * std::pow(x, a * (1.0 - e)) / (p.p_u * c2 * std::pow(p.omega, 1.0 - e));
    const double s5 = p.sigma2 * p.sigma2 * std::pow(x, a * (2.0 - e)) /
                      (np * p.p_u * p.p_d * c2 * std::pow(p.omega, 2.0 - e));
    const double s6 = std::pow(x, a * (1.0 - e)) / c2 * (np + noise_d * std::pow(x, a)) * bracket;
    detail::require_finite(s3, "gamma1 downlink noise");
    detail::require_finite(s4, "gamma1 pilot noise");
    detail::require_finite(s5, "gamma1 noise product");
    detail::require_finite(s6, "gamma1 contamination");
    g.gamma1 = s1 + s2 + s3 + s4 + s5 + s6;

    // gamma2: co-pilot downlink beams.
    double near = 0.0, beam = 0.0;
    for (const auto& j : b.interferers) {
        if (!sync && !phases.dd(j.cell)) continue;
        const double r = j.bs_to_user;
        near += std::pow(r, -a);
        const auto& dj = deltas[j.cell];
        if (sync) {
            if (k < dj.size()) beam += delta_lk / dj[k] * std::pow(r, -2.0 * a);
        } else {
            double ratio = 0.0;
            for (double d : dj) ratio += delta_lk / d;
            beam += ratio * std::pow(r, -2.0 * a);
        }
    }
    const double g2a = np / c2 * lead * near;
    double g2b = (p.m - 1.0) / c2 * std::pow(x, 2.0 * a) * beam;
    if (!sync) g2b *= (np + p.n_u()) / ntot2;
    detail::require_finite(g2a, "gamma2 co-pilot leakage");
    detail::require_finite(g2b, "gamma2 coherent contamination");
    g.gamma2 = g2a + g2b;

    // gamma3: users of frame-offset neighbours.
    if (!sync) {
        double users = 0.0;
        for (const auto& j : b.interferers) {
            if (!phases.dp_or_du(j.cell)) continue;
            for (std::size_t kk = 0; kk < j.serving.size(); ++kk)
                users += std::pow(j.serving[kk], a * e) * std::pow(j.to_user[kk], -a);
        }
        g.gamma3 = lead * p.p_u / (p.p_d * std::pow(p.omega, e) * c2) * users;
        detail::require_finite(g.gamma3, "gamma3 uplink interference");
    }
    return g;
}

inline InverseSinr inverse_sinr(const DistanceBundle& b, const PhaseIndicators& phases,
                                const std::vector<std::vector<double>>& deltas, const SystemParams& p) {
    return inverse_sinr(b, phases, deltas, p, derive_constants(p));
}

} // namespace sgmimo
