#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sgmimo/core/errors.hpp"

namespace sgmimo {

/// Large-scale gain beta = omega r^-alpha, r in km.
inline double path_loss(double r, double omega, double alpha) {
    if (!(r > 0.0)) throw DomainError("path loss needs a positive distance");
    return omega * std::pow(r, -alpha);
}

/// Fractional power control: P_u beta^-eps. No cap is applied.
inline double uplink_power(double beta_serving, double p_u, double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("power-control eps must lie in [0, 1]");
    if (!(beta_serving > 0.0)) throw DomainError("serving path loss must be positive");
    return p_u * std::pow(beta_serving, -eps);
}

/// N_p orthogonal pilots with unit-magnitude entries (DFT columns).
/// Entry (n, k) is stored at [k * n_p + n].
inline std::vector<std::complex<double>> pilot_matrix(int n_p) {
    if (n_p < 1) throw DomainError("pilot length must be >= 1");
    std::vector<std::complex<double>> phi(static_cast<std::size_t>(n_p) * n_p);
    for (int k = 0; k < n_p; ++k)
        for (int n = 0; n < n_p; ++n)
            phi[static_cast<std::size_t>(k) * n_p + n] =
                std::polar(1.0, 2.0 * std::numbers::pi * k * n / n_p);
    return phi;
}

} // namespace sgmimo
