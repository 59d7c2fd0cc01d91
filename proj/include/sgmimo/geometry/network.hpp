#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgmimo/core/params.hpp"
#include "sgmimo/geometry/point_process.hpp"
#include "sgmimo/geometry/voronoi.hpp"

namespace sgmimo {

/// Raised when a realization has no base station in the window.
class RealizationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One sampled network. users[c] are the users served by base station c;
/// user index k doubles as the pilot index.
struct NetworkRealization {
    PointSet base_stations;
    std::vector<std::vector<Point>> users;
    /// False for cells that could not place K users; such cells still
    /// interfere but are never measured.
    std::vector<bool> complete;
    std::vector<Polygon> cells;

    std::size_t n_cells() const { return base_stations.size(); }
    const Point& bs(std::size_t c) const { return base_stations.points[c]; }
    std::size_t incomplete_cells() const {
        std::size_t n = 0;
        for (bool ok : complete) n += ok ? 0 : 1;
        return n;
    }
};

inline constexpr int kMaxUserAttemptsPerCell = 10000;

/// Places K users uniformly in each Voronoi cell (clipped to the window),
/// rejecting positions within r0 of the serving base station.
inline NetworkRealization populate_network(const SystemParams& params, PointSet sites, Rng& rng) {
    if (sites.empty()) throw RealizationError("no base station in the simulation window");
    NetworkRealization net;
    net.base_stations = std::move(sites);
    const auto& pts = net.base_stations.points;
    const std::size_t n = pts.size();
    const int k = params.k();
    const double r0_2 = params.r0 * params.r0;
    net.users.resize(n);
    net.complete.assign(n, true);
    net.cells.resize(n);

    for (std::size_t c = 0; c < n; ++c) {
        net.cells[c] = voronoi_cell(pts, c, net.base_stations.window);
        auto& users = net.users[c];
        users.reserve(k);
        if (net.cells[c].size() < 3) {
            net.complete[c] = false;
            continue;
        }
        const BoundingBox box = bounding_box(net.cells[c]);
        int attempts = 0;
        while (static_cast<int>(users.size()) < k && attempts < kMaxUserAttemptsPerCell) {
            ++attempts;
            const Point cand{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)};
            if (distance2(cand, pts[c]) <= r0_2) continue;
            if (nearest_site(pts, cand) != c) continue;
            users.push_back(cand);
        }
        if (static_cast<int>(users.size()) < k) net.complete[c] = false;
    }
    return net;
}

inline NetworkRealization build_network(const SystemParams& params, const Window& window, Rng& rng) {
    return populate_network(params, sample_hppp(params.lambda, window, rng), rng);
}

/// Network on fixed base-station sites (used for controlled layouts).
inline NetworkRealization build_network_from_sites(const SystemParams& params, std::vector<Point> sites,
                                                   const Window& window, Rng& rng) {
    return populate_network(params, PointSet{std::move(sites), window}, rng);
}

} // namespace sgmimo
