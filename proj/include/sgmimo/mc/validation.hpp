#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sgmimo/analytic/coverage.hpp"
#include "sgmimo/mc/simulator.hpp"

namespace sgmimo {

struct ValidationReport {
    std::vector<double> thresholds;
    std::vector<double> analytic;
    std::vector<double> monte_carlo;
    std::vector<double> half_width;
    std::vector<double> deviation;
    double worst = 0.0;
    double gate = 0.0;
    bool pass = false;
    CoverageCurve analytic_curve;
    CoverageCurve mc_curve;
};

inline ValidationReport compare_curves(const CoverageCurve& analytic, const CoverageCurve& mc, double gate) {
    if (analytic.thresholds != mc.thresholds) throw DomainError("curves use different threshold grids");
    if (!(gate >= 0.0)) throw ConfigError("validation gate must be non-negative");
    ValidationReport r;
    r.thresholds = analytic.thresholds;
    r.analytic = analytic.coverage;
    r.monte_carlo = mc.coverage;
    r.half_width = mc.ci_half_width;
    r.gate = gate;
    for (std::size_t i = 0; i < r.thresholds.size(); ++i) {
        r.deviation.push_back(std::abs(analytic.coverage[i] - mc.coverage[i]));
        r.worst = std::max(r.worst, r.deviation.back());
    }
    r.pass = r.worst <= gate;
    r.analytic_curve = analytic;
    r.mc_curve = mc;
    return r;
}

/// Analytic coverage against Monte Carlo on the grid in `mc.thresholds`.
inline ValidationReport validate(const SystemParams& p, const McConfig& mc, double gate,
                                 const AnalyticOptions& opts = {}) {
    const CoverageCurve a = AnalyticEngine(p, opts).coverage(mc.thresholds);
    const CoverageCurve m = run_coverage_mc(p, mc);
    return compare_curves(a, m, gate);
}

} // namespace sgmimo
