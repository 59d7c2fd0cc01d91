#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "sgmimo/geometry/point_process.hpp"

namespace sgmimo {

/// Convex polygon, counter-clockwise vertices.
using Polygon = std::vector<Point>;

struct BoundingBox {
    Point lo;
    Point hi;
};

inline BoundingBox bounding_box(const Polygon& poly) {
    BoundingBox box{poly.front(), poly.front()};
    for (const auto& p : poly) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
        box.hi.x = std::max(box.hi.x, p.x);
        box.hi.y = std::max(box.hi.y, p.y);
    }
    return box;
}

inline double polygon_area(const Polygon& poly) {
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * std::abs(twice);
}

namespace detail {

// Keeps the part of `poly` closer to `site` than to `other` (one
// Sutherland-Hodgman pass against the perpendicular bisector).
inline Polygon clip_to_bisector(const Polygon& poly, const Point& site, const Point& other) {
    const double nx = other.x - site.x;
    const double ny = other.y - site.y;
    const double c = 0.5 * (other.x * other.x + other.y * other.y - site.x * site.x - site.y * site.y);
    auto side = [&](const Point& p) { return nx * p.x + ny * p.y - c; }; // <= 0 keeps
    Polygon out;
    out.reserve(poly.size() + 1);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        const double sa = side(a);
        const double sb = side(b);
        if (sa <= 0.0) out.push_back(a);
        if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
            const double t = sa / (sa - sb);
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}

} // namespace detail

/// Voronoi cell of sites[index], clipped to the window.
inline Polygon voronoi_cell(const std::vector<Point>& sites, std::size_t index, const Window& window) {
    const double h = window.half();
    Polygon cell{{-h, -h}, {h, -h}, {h, h}, {-h, h}};
    const Point& site = sites[index];
    // Nearer neighbours cut the most; processing them first keeps polygons small.
    std::vector<std::size_t> order;
    order.reserve(sites.size());
    for (std::size_t j = 0; j < sites.size(); ++j)
        if (j != index) order.push_back(j);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return distance2(sites[a], site) < distance2(sites[b], site);
    });
    for (std::size_t j : order) {
        // A bisector farther than twice the farthest vertex cannot cut the cell.
        double reach2 = 0.0;
        for (const auto& v : cell) reach2 = std::max(reach2, distance2(v, site));
        if (distance2(sites[j], site) > 4.0 * reach2) break;
        cell = detail::clip_to_bisector(cell, site, sites[j]);
        if (cell.empty()) break;
    }
    return cell;
}

/// Index of the nearest site (ties resolve to the lowest index).
inline std::size_t nearest_site(const std::vector<Point>& sites, const Point& p) {
    std::size_t best = 0;
    double best_d2 = distance2(sites[0], p);
    for (std::size_t j = 1; j < sites.size(); ++j) {
        const double d2 = distance2(sites[j], p);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    return best;
}

} // namespace sgmimo
