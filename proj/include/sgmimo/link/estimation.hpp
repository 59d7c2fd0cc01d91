#pragma once

#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "sgmimo/core/params.hpp"
#include "sgmimo/geometry/bundle.hpp"
#include "sgmimo/geometry/network.hpp"
#include "sgmimo/link/channel.hpp"

namespace sgmimo {

/// Variance of the pilot-phase leakage factor F (neighbour in pilot or uplink).
inline double f_variance(const FrameSplit& f) { return (f.n_p + f.n_u) / (double(f.n_tot) * f.n_tot); }
/// Variance of the pilot-phase leakage factor G (neighbour in downlink).
inline double g_variance(const FrameSplit& f) { return f.n_d / (double(f.n_tot) * f.n_tot); }

/// Per-antenna power of the pilot observation u_llk of the bundle's user:
///   P_lk b_llk + sum_{j in S_l\l} P_jk b_ljk
///   + F_var sum_{j notin S_l} sum_k' P_jk' b_ljk' + P_d N_p G_var sum_{j notin S_l} b_lj
///   + sigma^2 / N_p
inline double compute_delta(const DistanceBundle& b, const SystemParams& p) {
    auto beta = [&](double r) { return path_loss(r, p.omega, p.alpha); };
    auto power = [&](double serving) { return uplink_power(beta(serving), p.p_u, p.eps); };

    double delta = power(b.x) * beta(b.x) + p.sigma2 / p.n_p();
    const auto k = static_cast<std::size_t>(b.user);
    if (p.mode == Mode::synchronous) {
        for (const auto& j : b.interferers)
            if (k < j.serving.size()) delta += power(j.serving[k]) * beta(j.to_desired_bs[k]);
        return delta;
    }
    double users = 0.0, bs = 0.0;
    for (const auto& j : b.interferers) {
        for (std::size_t kk = 0; kk < j.serving.size(); ++kk)
            users += power(j.serving[kk]) * beta(j.to_desired_bs[kk]);
        bs += beta(j.bs_to_bs);
    }
    return delta + f_variance(p.frame) * users + p.p_d * p.n_p() * g_variance(p.frame) * bs;
}

/// Delta^(1) = Delta / (P_u omega^(1-eps)) - x^(-alpha (1-eps)).
inline double delta1(double delta, double x, const SystemParams& p) {
    if (!(x > 0.0)) throw DomainError("delta1 needs a positive serving distance");
    return delta / (p.p_u * std::pow(p.omega, 1.0 - p.eps)) - std::pow(x, -p.alpha * (1.0 - p.eps));
}

/// Delta for every user of every cell of a realization: table[c][k].
/// Interference is summed over all other cells in the window.
inline std::vector<std::vector<double>> delta_table(const NetworkRealization& net, const SystemParams& p) {
    const std::size_t n = net.n_cells();
    auto beta = [&](double r) { return path_loss(r, p.omega, p.alpha); };

    std::vector<std::vector<double>> power(n);
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& u : net.users[j])
            power[j].push_back(uplink_power(beta(distance(u, net.bs(j))), p.p_u, p.eps));

    std::vector<std::vector<double>> table(n);
    for (std::size_t l = 0; l < n; ++l) {
        const Point& bs = net.bs(l);
        double cross = 0.0; // asynchronous-only cell-level part
        if (p.mode == Mode::asynchronous) {
            double users = 0.0, bss = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == l) continue;
                for (std::size_t kk = 0; kk < net.users[j].size(); ++kk)
                    users += power[j][kk] * beta(distance(net.users[j][kk], bs));
                bss += beta(distance(net.bs(j), bs));
            }
            cross = f_variance(p.frame) * users + p.p_d * p.n_p() * g_variance(p.frame) * bss;
        }
        table[l].resize(net.users[l].size());
        for (std::size_t k = 0; k < net.users[l].size(); ++k) {
            double d = power[l][k] * beta(distance(net.users[l][k], bs)) + p.sigma2 / p.n_p() + cross;
            if (p.mode == Mode::synchronous) {
                for (std::size_t j = 0; j < n; ++j)
                    if (j != l && k < net.users[j].size())
                        d += power[j][k] * beta(distance(net.users[j][k], bs));
            }
            table[l][k] = d;
        }
    }
    return table;
}

struct LinkVariance {
    double beta = 0.0;
    double est_var = 0.0; ///< variance of the LMMSE estimate
    double err_var = 0.0; ///< beta - est_var
};

struct EstimationStats {
    double delta = 0.0;
    double delta1 = 0.0;
    double f_var = 0.0;
    double g_var = 0.0;
    LinkVariance serving;
    /// links[i][k']: BS l -> user k' of bundle interferer i.
    std::vector<std::vector<LinkVariance>> links;
};

/// LMMSE statistics at the tagged base station l. `own_deltas[k']` is
/// Delta_lk' for every user k' of cell l.
inline EstimationStats lmmse_variances(const DistanceBundle& b, const std::vector<double>& own_deltas,
                                       const SystemParams& p) {
    constexpr double kSlack = 1e-9;
    auto beta = [&](double r) { return path_loss(r, p.omega, p.alpha); };
    auto power = [&](double serving) { return uplink_power(beta(serving), p.p_u, p.eps); };
    const auto k = static_cast<std::size_t>(b.user);
    if (k >= own_deltas.size()) throw DomainError("own_deltas does not cover the tagged user");

    EstimationStats s;
    s.delta = own_deltas[k];
    s.delta1 = delta1(s.delta, b.x, p);
    s.f_var = f_variance(p.frame);
    s.g_var = g_variance(p.frame);

    double inv_sum = 0.0;
    for (double d : own_deltas) inv_sum += 1.0 / d;

    auto make = [&](double bt, double est, const char* what) {
        LinkVariance v{bt, est, bt - est};
        if (v.err_var < -kSlack * bt) {
            std::ostringstream os;
            os << "negative estimation-error variance on " << what << " link (beta=" << bt << ", est=" << est
               << ")";
            throw NumericalError(os.str());
        }
        return v;
    };

    const double bll = beta(b.x);
    s.serving = make(bll, power(b.x) * bll * bll / s.delta, "serving");
    s.links.reserve(b.interferers.size());
    for (const auto& j : b.interferers) {
        std::vector<LinkVariance> row;
        for (std::size_t kk = 0; kk < j.serving.size(); ++kk) {
            const double bt = beta(j.to_desired_bs[kk]);
            const double pw = power(j.serving[kk]);
            if (p.mode == Mode::synchronous) {
                if (kk >= own_deltas.size()) throw DomainError("own_deltas does not cover pilot index");
                row.push_back(make(bt, pw * bt * bt / own_deltas[kk], "co-pilot"));
            } else {
                row.push_back(make(bt, s.f_var * pw * bt * bt * inv_sum, "cross-phase"));
            }
        }
        s.links.push_back(std::move(row));
    }
    return s;
}

} // namespace sgmimo
