#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>

#include "sgmimo/core/errors.hpp"

namespace sgmimo {

// Distances are kilometres and powers are linear watts throughout. dB/dBm
// only appear at the configuration boundary (see io/config.hpp).

enum class Mode { synchronous, asynchronous };

inline std::string_view to_string(Mode mode) {
    return mode == Mode::synchronous ? "sync" : "async";
}

inline Mode parse_mode(std::string_view text) {
    if (text == "sync" || text == "synchronous") return Mode::synchronous;
    if (text == "async" || text == "asynchronous") return Mode::asynchronous;
    throw ConfigError("unknown mode '" + std::string(text) + "' (expected sync or async)");
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
/// A path-loss figure of `db` dB is an attenuation: 130 dB -> 1e-13.
inline double attenuation_db_to_linear(double db) { return std::pow(10.0, -db / 10.0); }
inline double linear_to_attenuation_db(double linear) { return -10.0 * std::log10(linear); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

/// Split of one coherence block into pilot, uplink and downlink symbols.
///
/// The uplink/downlink shares are stored as reals: parameter sweeps over the
/// pilot length keep the block length and the downlink/uplink ratio fixed, and
/// the resulting shares need not be whole symbols. `derive_frame` enforces the
/// integral split; `derive_frame_shares` does not.
struct FrameSplit {
    int n_tot = 40;
    int n_p = 10;
    double n_u = 10.0;
    double n_d = 20.0;

    double z() const { return n_d / n_u; }
    bool integral() const {
        return n_u == std::floor(n_u) && n_d == std::floor(n_d);
    }
};

inline FrameSplit derive_frame_shares(int n_tot, int n_p, double z) {
    if (n_p < 1 || n_tot <= n_p)
        throw ConfigError("frame (N_tot=" + std::to_string(n_tot) + ", N_p=" + std::to_string(n_p) +
                          ") leaves no data symbols");
    if (!(z > 0.0) || !std::isfinite(z)) throw ConfigError("frame ratio Z must be positive");
    const double data = static_cast<double>(n_tot - n_p);
    const double n_u = data / (1.0 + z);
    return {n_tot, n_p, n_u, data - n_u};
}

/// Solves N_u + N_d = N_tot - N_p, N_d = Z N_u in whole symbols.
inline FrameSplit derive_frame(int n_tot, int n_p, double z) {
    FrameSplit f = derive_frame_shares(n_tot, n_p, z);
    const double u = std::round(f.n_u);
    const double d = std::round(f.n_d);
    if (std::abs(f.n_u - u) > 1e-9 || std::abs(f.n_d - d) > 1e-9 || u < 1.0 || d < 1.0) {
        std::ostringstream os;
        os << "frame (N_tot=" << n_tot << ", N_p=" << n_p << ", Z=" << z
           << ") does not split into whole uplink/downlink symbols (N_u=" << f.n_u << ")";
        throw ConfigError(os.str());
    }
    f.n_u = u;
    f.n_d = static_cast<double>(n_tot - n_p) - u;
    return f;
}

/// Mean amplitude E{theta} of theta = ||u||, u ~ CN(0, I_M):
/// Gamma(M + 1/2) / Gamma(M), evaluated without forming either Gamma.
inline double c_m(int m);
/// var{theta} = M - C_M^2, evaluated without cancellation for large M.
inline double v_m(int m);

namespace detail {

// log(C_M / sqrt(M)) as an asymptotic series in 1/M (Stirling with Bernoulli
// polynomials). Odd powers only; accurate to ~1e-17 for M >= 20.
inline double log_cm_ratio_series(double m) {
    constexpr std::array<double, 7> coeff = {
        -1.0 / 8.0, 1.0 / 192.0, -1.0 / 640.0, 17.0 / 14336.0,
        -31.0 / 18432.0, 691.0 / 180224.0, -5461.0 / 425984.0};
    const double inv = 1.0 / m;
    const double inv2 = inv * inv;
    double term = inv;
    double sum = 0.0;
    for (double c : coeff) {
        sum += c * term;
        term *= inv2;
    }
    return sum;
}

constexpr int kSeriesThreshold = 20;

} // namespace detail

inline double c_m(int m) {
    if (m < 1) throw DomainError("C_M requires M >= 1");
    const double md = static_cast<double>(m);
    if (m < detail::kSeriesThreshold) return std::exp(std::lgamma(md + 0.5) - std::lgamma(md));
    return std::sqrt(md) * std::exp(detail::log_cm_ratio_series(md));
}

inline double v_m(int m) {
    if (m < 1) throw DomainError("V_M requires M >= 1");
    const double md = static_cast<double>(m);
    if (m < detail::kSeriesThreshold) {
        const double c = c_m(m);
        return md - c * c;
    }
    return -md * std::expm1(2.0 * detail::log_cm_ratio_series(md));
}

/// ln(N!) by summation; exact enough for the small shapes used here.
inline double log_factorial(int n) {
    if (n < 0) throw DomainError("factorial of a negative number");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

/// eta = N (N!)^(-1/N), the rate in the Gamma CDF bound.
inline double eta(int n) {
    if (n < 1) throw DomainError("Gamma shape N must be >= 1");
    const double nd = static_cast<double>(n);
    return nd * std::exp(-log_factorial(n) / nd);
}

inline double density_from_exclusion(double r_e) {
    if (!(r_e > 0.0) || !std::isfinite(r_e)) throw DomainError("exclusion radius must be positive");
    return 1.0 / (std::numbers::pi * r_e * r_e);
}

inline double exclusion_from_density(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("density must be positive");
    return 1.0 / std::sqrt(std::numbers::pi * lambda);
}

struct SystemParams {
    double p_d = dbm_to_watts(45.0);             ///< downlink BS power [W]
    double p_u = dbm_to_watts(23.0);             ///< uplink open-loop power [W]
    double sigma2 = dbm_to_watts(-200.0);        ///< noise power [W]
    double omega = attenuation_db_to_linear(130.0); ///< path loss at 1 km
    double alpha = 4.0;                          ///< path-loss exponent
    int m = 64;                                  ///< BS antennas
    FrameSplit frame{};
    double eps = 0.5;                            ///< fractional power control
    double lambda = density_from_exclusion(0.5); ///< BS density [km^-2]
    double r0 = 0.05;                            ///< user exclusion radius [km]
    double r_e = 0.5;                            ///< exclusion-ball radius [km]
    Mode mode = Mode::asynchronous;
    int n_gamma = 0; ///< Gamma shape N; 0 selects the mode default

    int k() const { return frame.n_p; }
    double n_tot() const { return frame.n_tot; }
    double n_p() const { return frame.n_p; }
    double n_u() const { return frame.n_u; }
    double n_d() const { return frame.n_d; }

    /// 1 for asynchronous, 4 for synchronous, unless overridden.
    int gamma_shape() const {
        if (n_gamma > 0) return n_gamma;
        return mode == Mode::asynchronous ? 1 : 4;
    }

    /// Sets lambda and derives R_e = (pi lambda)^(-1/2).
    SystemParams& with_density(double density) {
        lambda = density;
        r_e = exclusion_from_density(density);
        return *this;
    }
    /// Sets R_e and derives lambda = 1 / (pi R_e^2).
    SystemParams& with_exclusion_radius(double radius) {
        r_e = radius;
        lambda = density_from_exclusion(radius);
        return *this;
    }

    void validate() const {
        auto fail = [](const std::string& msg) { throw ConfigError(msg); };
        if (!(p_d > 0.0)) fail("P_d must be positive");
        if (!(p_u > 0.0)) fail("P_u must be positive");
        if (!(sigma2 >= 0.0)) fail("sigma^2 must be non-negative");
        if (!(omega > 0.0)) fail("omega must be positive");
        if (!(alpha > 2.0)) fail("path-loss exponent alpha must exceed 2");
        if (m < 1) fail("M must be >= 1");
        if (frame.n_p < 1 || frame.n_u <= 0.0 || frame.n_d <= 0.0)
            fail("frame split must have positive pilot, uplink and downlink shares");
        if (std::abs(frame.n_p + frame.n_u + frame.n_d - frame.n_tot) > 1e-9)
            fail("frame split must satisfy N_p + N_u + N_d = N_tot");
        if (!(eps >= 0.0 && eps <= 1.0)) fail("power-control eps must lie in [0, 1]");
        if (!(lambda > 0.0)) fail("density lambda must be positive");
        if (!(r0 > 0.0 || r0 == 0.0)) fail("r0 must be non-negative");
        if (!(r_e > r0)) fail("exclusion radius R_e must exceed r0");
        const double implied = density_from_exclusion(r_e);
        if (std::abs(implied - lambda) > 1e-6 * lambda)
            fail("lambda and R_e are inconsistent: expected R_e = (pi lambda)^(-1/2)");
        if (n_gamma < 0) fail("Gamma shape N must be >= 1");
    }
};

/// Table I defaults (Z = 2, R_e = 500 m, r0 = 50 m) for the given mode, M and eps.
inline SystemParams table_one(Mode mode = Mode::asynchronous, int m = 64, double eps = 0.5) {
    SystemParams p;
    p.mode = mode;
    p.m = m;
    p.eps = eps;
    p.frame = derive_frame(40, 10, 2.0);
    p.with_exclusion_radius(0.5);
    return p;
}

struct DerivedConstants {
    double c_m;
    double v_m;
    double eta;
    int n;
};

inline DerivedConstants derive_constants(const SystemParams& p) {
    const int n = p.gamma_shape();
    return {c_m(p.m), v_m(p.m), eta(n), n};
}

enum class Phase { pilot = 0, uplink = 1, downlink = 2 };

/// Probabilities over {pilot, uplink, downlink}.
struct PhaseTriple {
    double pilot;
    double uplink;
    double downlink;

    double sum() const { return pilot + uplink + downlink; }
    double operator[](Phase ph) const {
        switch (ph) {
        case Phase::pilot: return pilot;
        case Phase::uplink: return uplink;
        default: return downlink;
        }
    }
};

enum class Conditioning {
    joint_with_downlink, ///< P(observer in downlink and other cell in phase)
    joint_with_pilot,    ///< P(observer in pilot and other cell in phase)
    observer_in_downlink,
    observer_in_pilot,
};

/// Phase of a frame-offset neighbour seen by an observer cell. Independent,
/// uniformly offset frames give the product form.
inline PhaseTriple phase_probabilities(const FrameSplit& f, Conditioning cond) {
    const double tot = f.n_tot;
    const PhaseTriple share{f.n_p / tot, f.n_u / tot, f.n_d / tot};
    switch (cond) {
    case Conditioning::observer_in_downlink:
    case Conditioning::observer_in_pilot: return share;
    case Conditioning::joint_with_downlink:
        return {share.downlink * share.pilot, share.downlink * share.uplink, share.downlink * share.downlink};
    case Conditioning::joint_with_pilot:
        return {share.pilot * share.pilot, share.pilot * share.uplink, share.pilot * share.downlink};
    }
    return share;
}

} // namespace sgmimo
