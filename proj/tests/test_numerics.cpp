#include <atomic>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "sgmimo/numerics/parallel.hpp"
#include "sgmimo/numerics/quadrature.hpp"
#include "sgmimo/numerics/random.hpp"
#include "sgmimo/numerics/special.hpp"

using namespace sgmimo;

TEST(Quadrature, ExponentialMoments) {
    QuadratureConfig cfg;
    EXPECT_NEAR(integrate_to_infinity([](double t) { return std::exp(-t); }, 0.0, cfg).value, 1.0, 1e-8);
    EXPECT_NEAR(integrate_to_infinity([](double t) { return t * std::exp(-t); }, 0.0, cfg).value, 1.0, 1e-8);
    EXPECT_NEAR(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, cfg).value, 2.0, 1e-12);
}

TEST(Quadrature, ReversedLimitsAndEmptyInterval) {
    auto f = [](double x) { return x * x; };
    EXPECT_NEAR(integrate(f, 1.0, 0.0).value, -1.0 / 3.0, 1e-13);
    EXPECT_EQ(integrate(f, 2.0, 2.0).value, 0.0);
}

TEST(Quadrature, IncompleteGammaAtTableOne) {
    // int_{pi lambda r0^2}^inf s^(alpha eps / 2) e^-s ds with alpha eps / 2 = 1.
    const double a = 0.01;
    auto f = [](double s) { return s * std::exp(-s); };
    const double oracle = boost::math::tgamma(2.0, a);
    EXPECT_NEAR(integrate_to_infinity(f, a).value, oracle, 1e-8 * oracle);
}

TEST(Quadrature, NonConvergenceCarriesDiagnostics) {
    QuadratureConfig cfg;
    cfg.max_subdivisions = 3;
    try {
        integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, cfg, "oscillatory test");
        FAIL() << "expected a quadrature error";
    } catch (const QuadratureError& e) {
        EXPECT_EQ(e.subdivisions(), 3);
        EXPECT_GT(e.error(), 0.0);
        EXPECT_NE(std::string(e.what()).find("oscillatory test"), std::string::npos);
    }
}

TEST(Quadrature, NestedDoubleIntegral) {
    // int_0^1 int_0^x y dy dx = 1/6
    auto f = [](double, double y) { return y; };
    const double v =
        integrate_2d(f, 0.0, 1.0, [](double) { return 0.0; }, [](double x) { return x; }).value;
    EXPECT_NEAR(v, 1.0 / 6.0, 1e-12);
}

TEST(Quadrature, ConfigValidation) {
    QuadratureConfig c;
    EXPECT_NO_THROW(c.validate());
    c.truncation_mass = 1e-6;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.rel_tol = 0.0;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Quadrature, GaussianTruncation) {
    const double x = gaussian_truncation(0.05, std::numbers::pi * 1.27324, 1e-10);
    EXPECT_NEAR(std::exp(-std::numbers::pi * 1.27324 * (x * x - 0.0025)), 1e-10, 1e-16);
}

class GammaSegment : public ::testing::TestWithParam<double> {};

TEST_P(GammaSegment, MatchesBoostIncompleteGamma) {
    const double p = GetParam();
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.01, 5.0}, {0.5, 0.52}, {2.0, 80.0}}) {
        // int_a^b s^p e^-s ds = Gamma(p+1) [P(p+1, b) - P(p+1, a)]
        const double oracle =
            boost::math::tgamma_lower(p + 1.0, b) - boost::math::tgamma_lower(p + 1.0, a);
        EXPECT_NEAR(gamma_segment(p, a, b), oracle, 1e-9 * std::abs(oracle) + 1e-15) << "p=" << p << " a=" << a;
    }
}

TEST_P(GammaSegment, TruncatedMomentMatchesRatio) {
    const double p = GetParam();
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0.01, 1.0}, {0.01, 30.0}, {3.0, 3.01}, {0.2, 1e9}}) {
        const double num = boost::math::tgamma_lower(p + 1.0, b) - boost::math::tgamma_lower(p + 1.0, a);
        const double den = std::exp(-a) - std::exp(-b);
        const double oracle = num / den;
        EXPECT_NEAR(truncated_moment(p, a, b), oracle, 1e-8 * oracle) << "p=" << p << " a=" << a << " b=" << b;
    }
}

INSTANTIATE_TEST_SUITE_P(Powers, GammaSegment, ::testing::Values(0.5, 1.0, 1.7, 2.0, 3.0));

TEST(Special, Domain) {
    EXPECT_THROW(gamma_segment(-1.0, 0.0, 1.0), DomainError);
    EXPECT_THROW(truncated_moment(1.0, 1.0, 1.0), DomainError);
    EXPECT_EQ(truncated_moment(0.0, 0.3, 2.0), 1.0);
}

TEST(Random, ReplayAndStreams) {
    Rng a(42), b(42), c(derive_seed(42, 1));
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_NE(Rng(42).uniform(), c.uniform());
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    Rng d(3);
    for (int i = 0; i < 1000; ++i) {
        const double u = d.uniform_pos();
        EXPECT_GT(u, 0.0);
        EXPECT_LE(u, 1.0);
    }
}

TEST(Random, PoissonMean) {
    Rng rng(5);
    const double mean = 20.372;
    double sum = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(mean));
    EXPECT_NEAR(sum / n, mean, 3.0 * std::sqrt(mean / n));
    EXPECT_EQ(rng.poisson(0.0), 0u);
}

TEST(Parallel, CoversEveryIndexOnce) {
    for (unsigned threads : {1u, 2u, 5u}) {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, threads);
        for (auto& h : hits) EXPECT_EQ(h.load(), 1);
    }
}
