#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "sgmimo/mc/validation.hpp"

using namespace sgmimo;
using u64 = std::uint64_t;

namespace {

McConfig small_run(std::uint64_t seed, int trials = 40) {
    McConfig mc;
    mc.trials = trials;
    mc.seed = seed;
    mc.threads = 1;
    for (double db = -10.0; db <= 20.0; db += 2.0) mc.thresholds.push_back(std::pow(10.0, db / 10.0));
    return mc;
}

std::vector<double> flatten(const SinrSamples& s) {
    std::vector<double> v;
    for (const auto& t : s.per_trial)
        for (const auto& x : t) v.push_back(x.sinr);
    return v;
}

} // namespace

TEST(MonteCarlo, SeedReplay) {
    const SystemParams p = table_one();
    const auto a = flatten(collect_sinr(p, small_run(5)));
    const auto b = flatten(collect_sinr(p, small_run(5)));
    const auto c = flatten(collect_sinr(p, small_run(6)));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_FALSE(a.empty());
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
    const SystemParams p = table_one(Mode::synchronous);
    McConfig one = small_run(7), many = small_run(7);
    many.threads = 4;
    EXPECT_EQ(flatten(collect_sinr(p, one)), flatten(collect_sinr(p, many)));
}

TEST(MonteCarlo, WilsonInterval) {
    // Closed form at p = 0.5, n = 100, z = 1.96.
    const auto w = wilson_interval(u64{50}, u64{100});
    EXPECT_NEAR(w.centre, 0.5, 1e-12);
    const double z = 1.959963984540054, n = 100.0;
    EXPECT_NEAR(w.half_width, z / (1 + z * z / n) * std::sqrt(0.25 / n + z * z / (4 * n * n)), 1e-12);
    // Never collapses at the boundary.
    EXPECT_GT(wilson_interval(u64{0}, u64{1000}).half_width, 0.0);
    EXPECT_GT(wilson_interval(u64{1000}, u64{1000}).half_width, 0.0);
    EXPECT_THROW(wilson_interval(u64{0}, u64{0}), EstimationError);
    // Doubling n shrinks the interval by about 1/sqrt(2).
    EXPECT_NEAR(wilson_interval(u64{2000}, u64{10000}).half_width / wilson_interval(u64{1000}, u64{5000}).half_width,
                1.0 / std::sqrt(2.0), 1e-3);
}

TEST(MonteCarlo, IntervalShrinksWithTrials) {
    const SystemParams p = table_one();
    const auto c1 = run_coverage_mc(p, small_run(8, 40));
    const auto c2 = run_coverage_mc(p, small_run(8, 160));
    const std::size_t i = 5; // 0 dB
    ASSERT_GT(c1.coverage[i], 0.05);
    ASSERT_LT(c1.coverage[i], 0.95);
    EXPECT_NEAR(c2.ci_half_width[i] / c1.ci_half_width[i], std::sqrt(double(c1.samples) / double(c2.samples)), 0.1);
}

TEST(MonteCarlo, IsolatedCellIsAStepAtTheAntennaCeiling) {
    SystemParams p = table_one();
    p.sigma2 = 0.0;
    Rng rng(3);
    const auto net = build_network_from_sites(p, {Point{0, 0}}, Window{4.0}, rng);
    const auto samples = simulate_realization(net, p, derive_constants(p), 1.0, 0, rng);
    ASSERT_EQ(samples.size(), 10u);
    const double ceiling = c_m(64) * c_m(64) / (v_m(64) - 1.0 + 10.0);
    for (const auto& s : samples) EXPECT_NEAR(s.sinr, ceiling, 1e-9);
    SinrSamples all;
    all.per_trial.push_back(samples);
    const auto curve = coverage_from_samples(all, {ceiling * 0.999, ceiling * 1.001}, p);
    EXPECT_EQ(curve.coverage[0], 1.0);
    EXPECT_EQ(curve.coverage[1], 0.0);
}

TEST(MonteCarlo, EmpiricalCurveIsMonotone) {
    for (Mode mode : {Mode::asynchronous, Mode::synchronous}) {
        const auto c = run_coverage_mc(table_one(mode), small_run(9));
        for (std::size_t i = 1; i < c.coverage.size(); ++i) EXPECT_LE(c.coverage[i], c.coverage[i - 1]);
        EXPECT_EQ(c.method, Method::monte_carlo);
        EXPECT_EQ(c.ci_half_width.size(), c.coverage.size());
    }
}

TEST(MonteCarlo, RateIsTheIntegratedEmpiricalTail) {
    const SystemParams p = table_one();
    const auto s = collect_sinr(p, small_run(10));
    // int_0^inf P(log2(1 + SINR) > u) du over the sorted sample.
    std::vector<double> v;
    for (double x : flatten(s)) v.push_back(std::log2(1.0 + x));
    std::sort(v.begin(), v.end());
    double area = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        area += (v[i] - prev) * double(v.size() - i) / double(v.size());
        prev = v[i];
    }
    const double oracle = p.n_p() * p.n_d() / p.n_tot() * area;
    EXPECT_NEAR(rate_from_samples(s, p).rate, oracle, 1e-10 * oracle);
}

TEST(MonteCarlo, CellAreaWeighting) {
    const SystemParams p = table_one();
    McConfig mc = small_run(11);
    mc.weighting = UserWeighting::cell_area;
    const auto s = collect_sinr(p, mc);
    EXPECT_LT(s.effective_count(), double(s.count()));
    for (const auto& t : s.per_trial)
        for (const auto& x : t) EXPECT_GT(x.weight, 0.0);
    EXPECT_EQ(parse_weighting("cell-area"), UserWeighting::cell_area);
    EXPECT_THROW(parse_weighting("nope"), ConfigError);
}

TEST(MonteCarlo, UserCapIsHonoured) {
    McConfig mc = small_run(12, 10);
    mc.users_per_trial_cap = 3;
    const auto s = collect_sinr(table_one(), mc);
    for (const auto& t : s.per_trial) EXPECT_LE(t.size(), 3u);
}

TEST(MonteCarlo, ConfigValidation) {
    McConfig mc;
    mc.trials = 0;
    EXPECT_THROW(mc.validate(), ConfigError);
    mc = {};
    mc.margin = 2.0;
    EXPECT_THROW(mc.validate(), ConfigError);
    mc = {};
    mc.thresholds = {-1.0};
    EXPECT_THROW(mc.validate(), ConfigError);
}

TEST(MonteCarlo, NoEligibleUserIsAnError) {
    SystemParams p = table_one();
    McConfig mc = small_run(13, 3);
    mc.window_side = 0.5;
    mc.margin = 0.24;
    p = p.with_density(1e-3);
    EXPECT_THROW(collect_sinr(p, mc), EstimationError);
}

TEST(MonteCarlo, PhaseFrequenciesAcrossTrials) {
    const SystemParams p = table_one();
    Rng rng(14);
    double dl = 0.0, n = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto ph = draw_phases(p, 100, rng);
        for (std::size_t j = 0; j < ph.phase.size(); ++j) {
            dl += ph.dd(j) ? 1.0 : 0.0;
            n += 1.0;
        }
    }
    EXPECT_NEAR(dl / n, 0.5, 3.0 * std::sqrt(0.25 / n));
}

TEST(Validation, GateDecidesPass) {
    const SystemParams p = table_one();
    McConfig mc = small_run(15);
    const auto analytic = coverage(mc.thresholds, p);
    const auto mcc = run_coverage_mc(p, mc);
    EXPECT_FALSE(compare_curves(analytic, mcc, 0.0).pass);
    const auto r = compare_curves(analytic, mcc, 1.0);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.worst, *std::max_element(r.deviation.begin(), r.deviation.end()));
    auto shifted = mcc;
    shifted.thresholds.pop_back();
    shifted.coverage.pop_back();
    EXPECT_THROW(compare_curves(analytic, shifted, 0.05), DomainError);
    EXPECT_THROW(compare_curves(analytic, mcc, -1.0), ConfigError);
}
