#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sgmimo/core/errors.hpp"
#include "sgmimo/core/params.hpp"
#include "sgmimo/core/results.hpp"
#include "sgmimo/geometry/bundle.hpp"
#include "sgmimo/geometry/network.hpp"
#include "sgmimo/link/estimation.hpp"
#include "sgmimo/link/phases.hpp"
#include "sgmimo/link/sinr.hpp"
#include "sgmimo/numerics/parallel.hpp"
#include "sgmimo/numerics/random.hpp"

namespace sgmimo {

/// How tagged users are weighted in the estimators.
///   per_user:  every user of every measured cell counts once (N_p per cell,
///              so small cells are over-represented: the typical-cell law)
///   cell_area: each user is weighted by its cell's area, which recovers the
///              typical-user law of the analytic model
enum class UserWeighting { per_user, cell_area };

inline std::string_view to_string(UserWeighting w) { return w == UserWeighting::per_user ? "per-user" : "cell-area"; }

inline UserWeighting parse_weighting(std::string_view text) {
    if (text == "per-user") return UserWeighting::per_user;
    if (text == "cell-area") return UserWeighting::cell_area;
    throw ConfigError("unknown user weighting '" + std::string(text) + "' (expected per-user or cell-area)");
}

struct McConfig {
    int trials = 10000;
    std::uint64_t seed = 1;
    double window_side = 4.0; ///< km
    double margin = 1.0;      ///< km trimmed from each side for tagged cells
    std::vector<double> thresholds; ///< linear SINR
    int users_per_trial_cap = 0;    ///< 0 = every eligible user
    UserWeighting weighting = UserWeighting::per_user;
    unsigned threads = default_threads();
    bool progress = false;

    void validate() const {
        if (trials < 1) throw ConfigError("Monte Carlo trials must be >= 1");
        if (!(window_side > 0.0)) throw ConfigError("window side must be positive");
        if (!(margin >= 0.0) || !(margin < window_side / 2.0))
            throw ConfigError("margin must lie in [0, window/2)");
        if (users_per_trial_cap < 0) throw ConfigError("users_per_trial_cap must be >= 0");
        for (double t : thresholds)
            if (!(t >= 0.0)) throw ConfigError("thresholds must be non-negative linear SINR values");
    }
};

struct SinrSample {
    double sinr;
    double weight;
};

/// SINR samples from every trial, in trial order.
struct SinrSamples {
    std::vector<std::vector<SinrSample>> per_trial;
    std::uint64_t seed = 0;
    int degenerate_trials = 0; ///< trials without an eligible tagged user
    std::uint64_t skipped_users = 0; ///< users of incomplete central cells

    std::uint64_t count() const {
        std::uint64_t n = 0;
        for (const auto& t : per_trial) n += t.size();
        return n;
    }
    /// Kish effective sample size (equals count() for unit weights).
    double effective_count() const {
        double w = 0.0, w2 = 0.0;
        for (const auto& t : per_trial)
            for (const auto& v : t) {
                w += v.weight;
                w2 += v.weight * v.weight;
            }
        return w2 > 0.0 ? w * w / w2 : 0.0;
    }
};

/// Samples of the conditional SINR of one realization. Every cell is
/// tagged in turn (if its BS is in the measurement region), with fresh
/// neighbour phases per tagged cell.
inline std::vector<SinrSample> simulate_realization(const NetworkRealization& net, const SystemParams& p,
                                                    const DerivedConstants& dc, double margin, int cap, Rng& rng,
                                                    UserWeighting weighting = UserWeighting::per_user,
                                                    std::uint64_t* skipped = nullptr) {
    std::vector<SinrSample> out;
    const auto deltas = delta_table(net, p);
    for (std::size_t c = 0; c < net.n_cells(); ++c) {
        if (!in_measurement_region(net, c, margin)) continue;
        if (!net.complete[c]) {
            if (skipped) *skipped += static_cast<std::uint64_t>(p.k());
            continue;
        }
        const PhaseIndicators phases = draw_phases(p, net.n_cells(), rng);
        const double w = weighting == UserWeighting::cell_area ? polygon_area(net.cells[c]) : 1.0;
        for (int k = 0; k < p.k(); ++k) {
            if (cap > 0 && static_cast<int>(out.size()) >= cap) return out;
            auto bundle = extract_bundle(net, c, k, margin);
            if (!bundle) continue;
            out.push_back({inverse_sinr(*bundle, phases, deltas, p, dc).sinr(), w});
        }
    }
    return out;
}

/// Runs every trial on its own derived seed; results do not depend on the
/// thread count.
inline SinrSamples collect_sinr(const SystemParams& p, const McConfig& cfg) {
    p.validate();
    cfg.validate();
    const DerivedConstants dc = derive_constants(p);
    const Window window{cfg.window_side};
    SinrSamples s;
    s.seed = cfg.seed;
    s.per_trial.resize(static_cast<std::size_t>(cfg.trials));
    std::vector<std::uint64_t> skipped(s.per_trial.size(), 0);
    std::atomic<int> done{0};
    parallel_for(
        s.per_trial.size(),
        [&](std::size_t i) {
            Rng rng(derive_seed(cfg.seed, i));
            const auto sites = sample_hppp(p.lambda, window, rng);
            if (!sites.empty()) {
                const auto net = populate_network(p, sites, rng);
                s.per_trial[i] = simulate_realization(net, p, dc, cfg.margin, cfg.users_per_trial_cap, rng,
                                                      cfg.weighting, &skipped[i]);
            }
            const int finished = ++done;
            if (cfg.progress && cfg.trials >= 10 && finished % (cfg.trials / 10) == 0)
                std::fprintf(stderr, "monte-carlo: %d/%d trials\n", finished, cfg.trials);
        },
        cfg.threads);
    for (std::size_t i = 0; i < s.per_trial.size(); ++i) {
        if (s.per_trial[i].empty()) ++s.degenerate_trials;
        s.skipped_users += skipped[i];
    }
    if (s.count() == 0) throw EstimationError("no eligible tagged user in any trial");
    return s;
}

/// 95% Wilson score interval half-width and centre for k successes in n.
struct WilsonInterval {
    double centre;
    double half_width;
};

/// Wilson interval for an observed proportion `ph` over `n` (possibly
/// effective, non-integer) samples.
inline WilsonInterval wilson_interval(double ph, double n, double z = 1.959963984540054) {
    if (!(n > 0.0)) throw EstimationError("Wilson interval of an empty sample");
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (ph + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n));
    return {centre, half};
}

inline WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n) {
    if (n == 0) throw EstimationError("Wilson interval of an empty sample");
    return wilson_interval(static_cast<double>(k) / static_cast<double>(n), static_cast<double>(n));
}

inline CoverageCurve coverage_from_samples(const SinrSamples& s, const std::vector<double>& thresholds,
                                           const SystemParams& p) {
    CoverageCurve c;
    c.thresholds = thresholds;
    c.params = p;
    c.method = Method::monte_carlo;
    c.variant = "monte-carlo";
    c.n_gamma = p.gamma_shape();
    c.seed = s.seed;
    c.samples = s.count();
    std::vector<double> hits(thresholds.size(), 0.0);
    double total = 0.0;
    for (const auto& trial : s.per_trial)
        for (const auto& v : trial) {
            total += v.weight;
            for (std::size_t i = 0; i < thresholds.size(); ++i) hits[i] += v.sinr > thresholds[i] ? v.weight : 0.0;
        }
    if (!(total > 0.0)) throw EstimationError("Monte Carlo samples carry no weight");
    const double n_eff = s.effective_count();
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        const double ph = hits[i] / total;
        c.coverage.push_back(ph);
        c.ci_half_width.push_back(wilson_interval(ph, n_eff).half_width);
    }
    return c;
}

/// Per-cell rate samples (N_p N_d / N_tot) log2(1 + SINR), normal interval.
inline RateResult rate_from_samples(const SinrSamples& s, const SystemParams& p) {
    const double scale = p.n_p() * p.n_d() / p.n_tot();
    double w = 0.0, sum = 0.0, sum2 = 0.0;
    for (const auto& trial : s.per_trial)
        for (const auto& v : trial) {
            const double r = scale * std::log2(1.0 + v.sinr);
            w += v.weight;
            sum += v.weight * r;
            sum2 += v.weight * r * r;
        }
    if (!(w > 0.0)) throw EstimationError("Monte Carlo samples carry no weight");
    const double n = s.effective_count();
    RateResult out;
    out.method = Method::monte_carlo;
    out.params = p;
    out.n_gamma = p.gamma_shape();
    out.seed = s.seed;
    out.samples = s.count();
    out.rate = sum / w;
    const double var = std::max(0.0, sum2 / w - out.rate * out.rate) * (n > 1.0 ? n / (n - 1.0) : 0.0);
    out.ci_half_width = n > 0.0 ? 1.959963984540054 * std::sqrt(var / n) : 0.0;
    return out;
}

inline CoverageCurve run_coverage_mc(const SystemParams& p, const McConfig& cfg) {
    return coverage_from_samples(collect_sinr(p, cfg), cfg.thresholds, p);
}

inline RateResult run_rate_mc(const SystemParams& p, const McConfig& cfg) {
    return rate_from_samples(collect_sinr(p, cfg), p);
}

} // namespace sgmimo
