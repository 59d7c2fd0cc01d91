#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sgmimo/core/params.hpp"
#include "sgmimo/geometry/distance_laws.hpp"
#include "sgmimo/geometry/point_process.hpp"
#include "sgmimo/geometry/voronoi.hpp"
#include "sgmimo/numerics/random.hpp"

namespace sgmimo {

/// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.
template <class Cdf>
double ks_statistic(std::vector<double> sample, const Cdf& cdf) {
    if (sample.empty()) throw DomainError("KS statistic of an empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

/// Setup of the geometric distance-law check. Serving distances are
/// measured from uniformly placed users to the nearest point of an HPPP,
/// independently of the closed-form samplers.
struct DistanceCheckConfig {
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    double window_side = 6.0; ///< km
    double margin = 2.0;      ///< users are placed in the central square
    int users_per_realization = 100;
    double other_bs_distance = 0.5;      ///< r2 of the second law
    double pair_serving = 0.3;           ///< x of the third law
    double pair_separation = 0.2;        ///< r of the third law
};

struct LawCheck {
    std::string law;
    std::size_t samples = 0;
    double ks = 0.0;
};

namespace detail {

// Collects `n` nearest-BS distances that fall in (lo, hi), on a fresh
// stream derived from `stream`.
inline std::vector<double> geometric_distances(const SystemParams& p, const DistanceCheckConfig& cfg,
                                               std::uint64_t stream, double lo, double hi) {
    Rng rng(derive_seed(cfg.seed, stream));
    const Window window{cfg.window_side};
    const double inner = window.shrunk(cfg.margin).half();
    std::vector<double> out;
    out.reserve(cfg.samples);
    while (out.size() < cfg.samples) {
        const PointSet bs = sample_hppp(p.lambda, window, rng);
        if (bs.empty()) continue;
        for (int u = 0; u < cfg.users_per_realization && out.size() < cfg.samples; ++u) {
            const Point user{rng.uniform(-inner, inner), rng.uniform(-inner, inner)};
            const double d = distance(user, bs.points[nearest_site(bs.points, user)]);
            if (d > lo && d < hi) out.push_back(d);
        }
    }
    return out;
}

} // namespace detail

/// KS distances of the serving-distance law, the law given another BS at
/// r2, and the law given a user pair (x, r), each against its closed form.
inline std::vector<LawCheck> check_distance_laws(const SystemParams& p, const DistanceCheckConfig& cfg = {}) {
    if (cfg.samples == 0) throw ConfigError("distance-law check needs at least one sample");
    if (!(cfg.margin >= 0.0) || !(cfg.margin < cfg.window_side / 2.0))
        throw ConfigError("margin must lie in [0, window/2)");
    std::vector<LawCheck> out;

    const auto serving = serving_law(p.lambda, p.r0);
    auto s1 = detail::geometric_distances(p, cfg, 1, p.r0, kInf);
    out.push_back({"serving", s1.size(), ks_statistic(std::move(s1), [&](double r) { return serving.cdf(r); })});

    const auto given_other = serving_given_other_law(p.lambda, p.r0, cfg.other_bs_distance);
    auto s2 = detail::geometric_distances(p, cfg, 2, given_other.lo(), given_other.hi());
    out.push_back({"serving-given-other-bs", s2.size(),
                   ks_statistic(std::move(s2), [&](double r) { return given_other.cdf(r); })});

    const auto pair = serving_given_user_pair_law(p.lambda, p.r0, cfg.pair_separation, cfg.pair_serving);
    auto s3 = detail::geometric_distances(p, cfg, 3, pair.lo(), pair.hi());
    out.push_back({"serving-given-user-pair", s3.size(),
                   ks_statistic(std::move(s3), [&](double r) { return pair.cdf(r); })});
    return out;
}

} // namespace sgmimo
