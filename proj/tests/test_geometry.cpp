#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "sgmimo/geometry/bundle.hpp"
#include "sgmimo/geometry/distance_check.hpp"
#include "sgmimo/geometry/distance_laws.hpp"
#include "sgmimo/geometry/network.hpp"
#include "sgmimo/numerics/quadrature.hpp"

using namespace sgmimo;

namespace {

const SystemParams kTable = table_one();
const double kLambda = kTable.lambda;
const double kR0 = kTable.r0;

// Weighted KS distance: empirical CDF built from (value, weight) pairs.
template <class Cdf>
double weighted_ks(std::vector<std::pair<double, double>> s, const Cdf& cdf) {
    std::sort(s.begin(), s.end());
    double total = 0.0;
    for (const auto& [v, w] : s) total += w;
    double acc = 0.0, d = 0.0;
    for (const auto& [v, w] : s) {
        const double f = cdf(v);
        d = std::max(d, f - acc / total);
        acc += w;
        d = std::max(d, acc / total - f);
    }
    return d;
}

// Serving distances of every user of every measured cell, with the
// cell's area alongside.
std::vector<std::pair<double, double>> simulator_serving_distances(std::size_t n, double window, double margin,
                                                                   std::uint64_t seed) {
    std::vector<std::pair<double, double>> out;
    for (std::uint64_t trial = 0; out.size() < n; ++trial) {
        Rng rng(derive_seed(seed, trial));
        const PointSet sites = sample_hppp(kLambda, Window{window}, rng);
        if (sites.empty()) continue;
        const auto net = populate_network(kTable, sites, rng);
        for (std::size_t c = 0; c < net.n_cells(); ++c) {
            if (!net.complete[c] || !in_measurement_region(net, c, margin)) continue;
            const double area = polygon_area(net.cells[c]);
            for (const auto& u : net.users[c]) out.emplace_back(distance(u, net.bs(c)), area);
        }
    }
    out.resize(n);
    return out;
}

} // namespace

TEST(PointProcess, EmptyAtZeroDensity) {
    Rng rng(1);
    EXPECT_TRUE(sample_hppp(0.0, Window{4.0}, rng).empty());
    EXPECT_THROW(sample_hppp(-1.0, Window{4.0}, rng), DomainError);
}

TEST(PointProcess, MeanCountAndContainment) {
    const Window w{4.0};
    const int draws = 10000;
    double sum = 0.0;
    Rng rng(7);
    for (int i = 0; i < draws; ++i) {
        const PointSet s = sample_hppp(kLambda, w, rng);
        sum += static_cast<double>(s.size());
        for (const auto& p : s.points) ASSERT_TRUE(w.contains(p));
    }
    const double mean = kLambda * 16.0;
    EXPECT_NEAR(mean, 20.372, 1e-3);
    EXPECT_NEAR(sum / draws, mean, 3.0 * std::sqrt(mean / draws));
}

TEST(PointProcess, Replay) {
    Rng a(11), b(11);
    const auto s1 = sample_hppp(kLambda, Window{4.0}, a);
    const auto s2 = sample_hppp(kLambda, Window{4.0}, b);
    EXPECT_EQ(s1.points, s2.points);
}

TEST(Voronoi, CellsTileTheWindow) {
    Rng rng(3);
    const Window w{4.0};
    const PointSet s = sample_hppp(kLambda, w, rng);
    double area = 0.0;
    for (std::size_t c = 0; c < s.size(); ++c) area += polygon_area(voronoi_cell(s.points, c, w));
    EXPECT_NEAR(area, w.area(), 1e-9);
}

TEST(Network, AssociationAndExclusionInvariants) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const auto net = build_network(kTable, Window{4.0}, rng);
        for (std::size_t c = 0; c < net.n_cells(); ++c) {
            if (net.complete[c]) {
                EXPECT_EQ(net.users[c].size(), 10u);
            }
            for (const auto& u : net.users[c]) {
                EXPECT_EQ(nearest_site(net.base_stations.points, u), c);
                EXPECT_GT(distance(u, net.bs(c)), kR0);
            }
        }
    }
}

TEST(Network, ZeroExclusionRejectsNothingForProximity) {
    SystemParams p = kTable;
    p.r0 = 0.0;
    bool close_user = false;
    for (std::uint64_t seed = 0; seed < 200 && !close_user; ++seed) {
        Rng rng(seed);
        const auto net = build_network(p, Window{4.0}, rng);
        for (std::size_t c = 0; c < net.n_cells(); ++c)
            for (const auto& u : net.users[c]) close_user = close_user || distance(u, net.bs(c)) < 0.05;
    }
    EXPECT_TRUE(close_user);
}

TEST(Network, EmptyWindowIsARealizationError) {
    Rng rng(1);
    EXPECT_THROW(populate_network(kTable, PointSet{{}, Window{4.0}}, rng), RealizationError);
}

TEST(ServingLaw, NormalizationSupportAndMedian) {
    const auto law = serving_law(kLambda, kR0);
    const double mass = integrate_to_infinity([&](double r) { return law.pdf(r); }, kR0).value;
    EXPECT_NEAR(mass, 1.0, 1e-9);
    EXPECT_EQ(pdf_serving(kR0 / 2.0, kLambda, kR0), 0.0);
    EXPECT_NEAR(pdf_serving(0.3, kLambda, kR0),
                2 * std::numbers::pi * kLambda * 0.3 * std::exp(-std::numbers::pi * kLambda * (0.09 - kR0 * kR0)),
                1e-14);

    Rng rng(17);
    std::vector<double> s(100001);
    for (auto& v : s) v = sample_serving(kLambda, kR0, rng);
    std::nth_element(s.begin(), s.begin() + 50000, s.end());
    const double median = std::sqrt(kR0 * kR0 + std::log(2.0) / (std::numbers::pi * kLambda));
    EXPECT_NEAR(s[50000], median, 0.005);
}

TEST(GivenOtherLaw, NormalizationAndLimit) {
    const auto law = serving_given_other_law(kLambda, kR0, 0.4);
    EXPECT_NEAR(integrate([&](double r) { return law.pdf(r); }, kR0, 0.4).value, 1.0, 1e-9);
    EXPECT_EQ(law.pdf(0.41), 0.0);
    for (double r : {0.06, 0.2, 0.5, 1.0})
        EXPECT_NEAR(pdf_serving_given_other(r, 50.0, kLambda, kR0), pdf_serving(r, kLambda, kR0), 1e-6);
    EXPECT_THROW(serving_given_other_law(kLambda, kR0, kR0), DomainError);
}

TEST(GivenOtherLaw, MatchesRejectionOracle) {
    const double r2 = 0.4;
    Rng rng(23);
    std::vector<double> oracle;
    while (oracle.size() < 100000) {
        const double r = sample_serving(kLambda, kR0, rng);
        if (r < r2) oracle.push_back(r);
    }
    std::vector<double> direct(100000);
    for (auto& v : direct) v = sample_serving_given_other(r2, kLambda, kR0, rng);
    // Both samples against the closed-form CDF, then against each other.
    const auto law = serving_given_other_law(kLambda, kR0, r2);
    EXPECT_LT(ks_statistic(oracle, [&](double r) { return law.cdf(r); }), 0.01);
    EXPECT_LT(ks_statistic(direct, [&](double r) { return law.cdf(r); }), 0.01);
    std::sort(oracle.begin(), oracle.end());
    std::sort(direct.begin(), direct.end());
    double d = 0.0;
    for (std::size_t i = 0; i < oracle.size(); i += 97)
        d = std::max(d, std::abs(double(std::lower_bound(direct.begin(), direct.end(), oracle[i]) - direct.begin()) -
                                 double(i)) /
                            1e5);
    EXPECT_LT(d, 0.01);
}

TEST(UserPairLaw, SupportNormalizationAndMean) {
    const double x = 1.0, r = 0.2;
    const auto law = serving_given_user_pair_law(kLambda, kR0, r, x);
    EXPECT_EQ(law.lo(), 0.8);
    EXPECT_EQ(law.hi(), 1.2);
    EXPECT_EQ(pdf_serving_given_user_pair(0.79, r, x, kLambda, kR0), 0.0);
    EXPECT_EQ(pdf_serving_given_user_pair(1.21, r, x, kLambda, kR0), 0.0);
    EXPECT_NEAR(integrate([&](double s) { return law.pdf(s); }, 0.8, 1.2).value, 1.0, 1e-9);

    const double mean = integrate([&](double s) { return s * law.pdf(s); }, 0.8, 1.2).value;
    Rng rng(29);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) sum += sample_serving_given_user_pair(r, x, kLambda, kR0, rng);
    EXPECT_NEAR(sum / 1e5 / mean, 1.0, 0.005);
    EXPECT_THROW(serving_given_user_pair_law(kLambda, kR0, r, kR0), DomainError);
    EXPECT_THROW(serving_given_user_pair_law(kLambda, kR0, 0.0, x), DomainError);
}

TEST(UserPairLaw, TriangleInequalityOnSamples) {
    // Nearest-BS association plus the triangle inequality give
    // max(r0, x - r) < s < x + r; nothing bounds s below by r - x.
    Rng rng(31);
    for (int i = 0; i < 10000; ++i) {
        const double x = kR0 + rng.uniform(0.0, 1.0);
        const double r = rng.uniform(0.01, 1.0);
        const double s = sample_serving_given_user_pair(r, x, kLambda, kR0, rng);
        ASSERT_GE(s, x - r - 1e-12);
        ASSERT_LE(s, x + r + 1e-12);
        ASSERT_GE(s, kR0);
    }
}

TEST(DistanceCheck, GeometricSamplingMatchesAllThreeLaws) {
    DistanceCheckConfig cfg;
    cfg.samples = 20000;
    for (const auto& c : check_distance_laws(kTable, cfg)) {
        EXPECT_EQ(c.samples, 20000u);
        EXPECT_LT(c.ks, 0.02) << c.law;
    }
}

TEST(DistanceCheck, KsStatisticOfKnownSample) {
    // Uniform grid midpoints against the uniform CDF: D = 1/(2n).
    std::vector<double> s;
    for (int i = 0; i < 100; ++i) s.push_back((i + 0.5) / 100.0);
    EXPECT_NEAR(ks_statistic(s, [](double u) { return u; }), 0.005, 1e-12);
}

// The geometry invariant as literally stated: serving distances of the
// users placed by the simulator (N_p per cell, every measured cell) on the
// default 4 km window with a 1 km margin.
TEST(ServingInvariant, SimulatorUsersFollowServingLawLiteral) {
    const auto law = serving_law(kLambda, kR0);
    const auto s = simulator_serving_distances(100000, 4.0, 1.0, 41);
    std::vector<double> v;
    for (const auto& [d, w] : s) v.push_back(d);
    EXPECT_LT(ks_statistic(v, [&](double r) { return law.cdf(r); }), 0.02);
}

// Same users weighted by their cell's area (the typical-user law) on a
// window large enough that measured cells are not clipped.
TEST(ServingInvariant, AreaWeightedSimulatorUsersFollowServingLaw) {
    const auto law = serving_law(kLambda, kR0);
    const auto s = simulator_serving_distances(100000, 6.0, 2.0, 43);
    EXPECT_LT(weighted_ks(s, [&](double r) { return law.cdf(r); }), 0.02);
}

TEST(Bundle, SingleCellHasNoInterferers) {
    Rng rng(1);
    const auto net = build_network_from_sites(kTable, {Point{0.0, 0.0}}, Window{4.0}, rng);
    const auto b = extract_bundle(net, 0, 0, 1.0);
    ASSERT_TRUE(b.has_value());
    EXPECT_TRUE(b->interferers.empty());
    EXPECT_GT(b->x, kR0);
}

TEST(Bundle, MatchesBruteForceAndOrdering) {
    Rng rng(53);
    const auto net = build_network(kTable, Window{4.0}, rng);
    int checked = 0;
    for (std::size_t c = 0; c < net.n_cells(); ++c) {
        for (int k = 0; k < kTable.k(); ++k) {
            const auto b = extract_bundle(net, c, k, 1.0);
            if (!b) {
                EXPECT_TRUE(!net.complete[c] || !in_measurement_region(net, c, 1.0));
                break;
            }
            ++checked;
            const Point& u = net.users[c][k];
            const Point& bs = net.bs(c);
            EXPECT_DOUBLE_EQ(b->x, std::hypot(u.x - bs.x, u.y - bs.y));
            EXPECT_EQ(b->interferers.size(), net.n_cells() - 1);
            for (std::size_t i = 0; i < b->interferers.size(); ++i) {
                const auto& j = b->interferers[i];
                if (i > 0) {
                    EXPECT_LE(b->interferers[i - 1].bs_to_user, j.bs_to_user);
                }
                const Point& bj = net.bs(j.cell);
                EXPECT_DOUBLE_EQ(j.bs_to_user, std::hypot(bj.x - u.x, bj.y - u.y));
                EXPECT_DOUBLE_EQ(j.bs_to_bs, std::hypot(bj.x - bs.x, bj.y - bs.y));
                for (std::size_t kk = 0; kk < net.users[j.cell].size(); ++kk) {
                    const Point& v = net.users[j.cell][kk];
                    EXPECT_DOUBLE_EQ(j.serving[kk], std::hypot(v.x - bj.x, v.y - bj.y));
                    EXPECT_DOUBLE_EQ(j.to_desired_bs[kk], std::hypot(v.x - bs.x, v.y - bs.y));
                    EXPECT_DOUBLE_EQ(j.to_user[kk], std::hypot(v.x - u.x, v.y - u.y));
                    // Nearest-BS association and the triangle inequality.
                    EXPECT_LE(j.serving[kk], j.to_desired_bs[kk]);
                    EXPECT_LT(j.to_desired_bs[kk], j.to_user[kk] + b->x + 1e-12);
                    EXPECT_GT(j.serving[kk], kR0);
                }
            }
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Bundle, OutsideMeasurementRegionIsSkipped) {
    Rng rng(1);
    const auto net = build_network_from_sites(kTable, {Point{0.0, 0.0}, Point{1.8, 1.8}}, Window{4.0}, rng);
    EXPECT_TRUE(extract_bundle(net, 0, 0, 1.0).has_value());
    EXPECT_FALSE(extract_bundle(net, 1, 0, 1.0).has_value());
}
