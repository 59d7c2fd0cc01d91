#pragma once

#include <cmath>
#include <vector>

#include "sgmimo/core/errors.hpp"
#include "sgmimo/numerics/random.hpp"

namespace sgmimo {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double distance2(const Point& a, const Point& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Axis-aligned square centred on the origin. Units: km.
struct Window {
    double side = 4.0;

    double half() const { return 0.5 * side; }
    double area() const { return side * side; }
    bool contains(const Point& p) const { return std::abs(p.x) <= half() && std::abs(p.y) <= half(); }
    /// Square of side (side - 2 margin) sharing the centre.
    Window shrunk(double margin) const { return Window{side - 2.0 * margin}; }
};

struct PointSet {
    std::vector<Point> points;
    Window window;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Homogeneous Poisson point process of intensity `lambda` [km^-2] on `window`.
inline PointSet sample_hppp(double lambda, const Window& window, Rng& rng) {
    if (lambda < 0.0) throw DomainError("point-process density must be non-negative");
    if (!(window.side > 0.0)) throw DomainError("window side must be positive");
    PointSet set{{}, window};
    const auto n = rng.poisson(lambda * window.area());
    set.points.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        set.points.push_back({rng.uniform(-window.half(), window.half()), rng.uniform(-window.half(), window.half())});
    return set;
}

} // namespace sgmimo
