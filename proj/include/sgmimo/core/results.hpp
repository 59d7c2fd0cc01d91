#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "sgmimo/core/params.hpp"

namespace sgmimo {

enum class Method { analytic, analytic_special, monte_carlo };

inline std::string_view to_string(Method m) {
    switch (m) {
    case Method::analytic: return "analytic";
    case Method::analytic_special: return "analytic-special";
    case Method::monte_carlo: return "monte-carlo";
    }
    return "analytic";
}

/// P(SINR > T) over a threshold grid. Thresholds are linear SINR values.
struct CoverageCurve {
    std::vector<double> thresholds;
    std::vector<double> coverage;
    /// 95% half-widths (Monte Carlo only; empty otherwise).
    std::vector<double> ci_half_width;
    SystemParams params;
    Method method = Method::analytic;
    std::string_view variant = "general"; ///< special-case name for analytic-special
    int n_gamma = 1;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    /// Values pulled back into [0, 1] and the largest excursion seen.
    int clamp_events = 0;
    double max_clamp = 0.0;
};

struct RateResult {
    double rate = 0.0; ///< bits/s/Hz per cell
    Method method = Method::analytic;
    double ci_half_width = 0.0; ///< Monte Carlo only
    SystemParams params;
    int n_gamma = 1;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
};

} // namespace sgmimo
