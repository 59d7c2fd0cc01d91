#pragma once

#include <cstddef>
#include <vector>

#include "sgmimo/core/params.hpp"
#include "sgmimo/numerics/random.hpp"

namespace sgmimo {

/// Phase of every other cell while the observer cell is in its downlink.
/// phase[j] == downlink realises chi^dd = 1; pilot and uplink realise chi^dp
/// and chi^du.
struct PhaseIndicators {
    std::vector<Phase> phase;

    bool dd(std::size_t j) const { return phase[j] == Phase::downlink; }
    /// chi^dp + chi^du
    bool dp_or_du(std::size_t j) const { return phase[j] != Phase::downlink; }
};

/// Independent categorical phases with probabilities (N_p, N_u, N_d) / N_tot.
/// In synchronous operation every cell shares the observer's phase.
inline PhaseIndicators draw_phases(const SystemParams& params, std::size_t n_cells, Rng& rng) {
    PhaseIndicators out{std::vector<Phase>(n_cells, Phase::downlink)};
    if (params.mode == Mode::synchronous) return out;
    const PhaseTriple prob = phase_probabilities(params.frame, Conditioning::observer_in_downlink);
    for (auto& ph : out.phase) {
        const double u = rng.uniform();
        if (u < prob.pilot)
            ph = Phase::pilot;
        else if (u < prob.pilot + prob.uplink)
            ph = Phase::uplink;
        else
            ph = Phase::downlink;
    }
    return out;
}

} // namespace sgmimo
