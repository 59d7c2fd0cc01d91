// Coverage and rate of the default network in both modes, plus a small
// Monte Carlo cross-check.
//
//   ./coverage_and_rate [trials]

#include <cstdio>
#include <cstdlib>

#include "sgmimo/analytic/coverage.hpp"
#include "sgmimo/mc/simulator.hpp"

int main(int argc, char** argv) {
    using namespace sgmimo;
    const int trials = argc > 1 ? std::atoi(argv[1]) : 200;

    std::vector<double> thresholds;
    for (double db = -10.0; db <= 20.0; db += 5.0) thresholds.push_back(db_to_linear(db));

    for (Mode mode : {Mode::synchronous, Mode::asynchronous}) {
        SystemParams p = table_one(mode, 64, 0.5);
        const AnalyticEngine engine(p);
        const CoverageCurve analytic = engine.coverage(thresholds);

        McConfig mc;
        mc.trials = trials;
        mc.seed = 7;
        mc.thresholds = thresholds;
        const CoverageCurve simulated = run_coverage_mc(p, mc);

        std::printf("%s, M=%d, eps=%.1f: rate %.3f bits/s/Hz per cell\n", std::string(to_string(mode)).c_str(), p.m,
                    p.eps, engine.ergodic_rate().rate);
        std::printf("  T[dB]  analytic  monte-carlo (+-95%%)\n");
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            std::printf("  %5.1f  %8.4f  %8.4f (%.4f)\n", linear_to_db(thresholds[i]), analytic.coverage[i],
                        simulated.coverage[i], simulated.ci_half_width[i]);
    }
}
