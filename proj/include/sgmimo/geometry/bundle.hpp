#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "sgmimo/geometry/network.hpp"

namespace sgmimo {

/// Distances from one interfering cell j to the tagged user (l, k).
struct InterfererDistances {
    std::size_t cell = 0;
    double bs_to_user = 0.0;           ///< r_jlk: BS j -> tagged user
    double bs_to_bs = 0.0;             ///< r_lj: BS j -> tagged BS l
    std::vector<double> serving;       ///< r_jjk': user (j,k') -> BS j
    std::vector<double> to_desired_bs; ///< r_ljk': user (j,k') -> BS l
    std::vector<double> to_user;       ///< r_lkjk': user (j,k') -> tagged user
};

/// Every distance the conditional SINR of user (cell, user) depends on.
/// Interferers are ordered by bs_to_user.
struct DistanceBundle {
    std::size_t cell = 0;
    int user = 0;
    double x = 0.0; ///< r_llk, tagged serving distance
    std::vector<InterfererDistances> interferers;
};

/// Whether base station `cell` lies in the measurement region.
inline bool in_measurement_region(const NetworkRealization& net, std::size_t cell, double margin) {
    return net.base_stations.window.shrunk(margin).contains(net.bs(cell));
}

/// Bundle for user k of `cell`, or nullopt when the cell is outside the
/// central (window - 2 margin) square or could not place all its users.
inline std::optional<DistanceBundle> extract_bundle(const NetworkRealization& net, std::size_t cell, int k,
                                                    double margin) {
    if (cell >= net.n_cells() || !net.complete[cell] || !in_measurement_region(net, cell, margin))
        return std::nullopt;
    if (k < 0 || static_cast<std::size_t>(k) >= net.users[cell].size()) return std::nullopt;

    const Point& bs_l = net.bs(cell);
    const Point& user = net.users[cell][static_cast<std::size_t>(k)];
    DistanceBundle b;
    b.cell = cell;
    b.user = k;
    b.x = distance(user, bs_l);
    b.interferers.reserve(net.n_cells() - 1);
    for (std::size_t j = 0; j < net.n_cells(); ++j) {
        if (j == cell) continue;
        InterfererDistances d;
        d.cell = j;
        d.bs_to_user = distance(net.bs(j), user);
        d.bs_to_bs = distance(net.bs(j), bs_l);
        const auto& uj = net.users[j];
        d.serving.reserve(uj.size());
        d.to_desired_bs.reserve(uj.size());
        d.to_user.reserve(uj.size());
        for (const auto& u : uj) {
            d.serving.push_back(distance(u, net.bs(j)));
            d.to_desired_bs.push_back(distance(u, bs_l));
            d.to_user.push_back(distance(u, user));
        }
        b.interferers.push_back(std::move(d));
    }
    std::stable_sort(b.interferers.begin(), b.interferers.end(),
                     [](const auto& a, const auto& c) { return a.bs_to_user < c.bs_to_user; });
    return b;
}

} // namespace sgmimo
