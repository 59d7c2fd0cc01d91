#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "sgmimo/core/errors.hpp"
#include "sgmimo/numerics/quadrature.hpp"
#include "sgmimo/numerics/special.hpp"

namespace sgmimo {

/// Campbell exponent of the co-pilot contamination sum,
///
///   phi(d) = int_{te}^inf E[ exp(d S^p t^(-alpha/2)) - 1 | a < S < t ] dt,
///
/// where S has density proportional to e^{-s}. E2 = exp(m * phi(d)) with
/// d = D R_e^(-alpha (1 - eps)) and m = N_p (async) or 1 (sync).
///
/// phi depends on the thresholds and the serving distance only through d,
/// so it is tabulated once per geometry as a Chebyshev series of
/// log(-phi) in log(-d). `direct` evaluates the nested integral.
class ContaminationExponent {
public:
    struct Key {
        double p, alpha, a, te, rel_tol;
        auto tie() const { return std::tie(p, alpha, a, te, rel_tol); }
        bool operator<(const Key& o) const { return tie() < o.tie(); }
    };

    static constexpr double kLogMin = -23.0;
    static constexpr double kLogMax = 16.0;
    static constexpr int kNodes = 128;

    ContaminationExponent(double p, double alpha, double a, double te, const QuadratureConfig& cfg = {})
        : p_(p), alpha_(alpha), a_(a), te_(te), cfg_(cfg) {
        if (p < 0.0 || !(alpha > 2.0) || a < 0.0 || !(te > a))
            throw DomainError("contamination exponent needs p >= 0, alpha > 2 and 0 <= a < te");
    }

    /// First-order coefficient: phi(d) ~ d * slope as d -> 0.
    double slope() const {
        const QuadratureConfig inner = cfg_.nested();
        auto f = [&](double t) { return std::pow(t, -alpha_ / 2.0) * truncated_moment(p_, a_, t, inner); };
        return integrate_to_infinity(f, te_, cfg_, "contamination slope").value;
    }

    double direct(double d) const {
        if (d > 0.0) throw DomainError("contamination exponent needs d <= 0");
        if (d == 0.0) return 0.0;
        const QuadratureConfig inner = cfg_.nested();
        auto outer = [&](double t) {
            const double k = d * std::pow(t, -alpha_ / 2.0);
            if (p_ == 0.0) return std::expm1(k);
            const double len = std::min(t - a_, 50.0);
            auto g = [&](double w) { return std::exp(-w) * std::expm1(k * std::pow(a_ + w, p_)); };
            return integrate(g, 0.0, len, inner, "contamination exponent inner").value / -std::expm1(-len);
        };
        return integrate_to_infinity(outer, te_, cfg_, "contamination exponent").value;
    }

    /// Tabulated phi(d); builds the table on first use.
    double operator()(double d) const {
        if (d > 0.0) throw DomainError("contamination exponent needs d <= 0");
        if (d == 0.0) return 0.0;
        std::call_once(built_, [this] { build(); });
        const double u = std::log(-d);
        if (u < kLogMin) return d * slope_;
        if (u > kLogMax) return -std::exp(clenshaw(kLogMax) + 2.0 / alpha_ * (u - kLogMax));
        return -std::exp(clenshaw(u));
    }

    /// Shared instance per geometry.
    static std::shared_ptr<const ContaminationExponent> cached(double p, double alpha, double a, double te,
                                                               const QuadratureConfig& cfg) {
        static std::mutex mutex;
        static std::map<Key, std::shared_ptr<const ContaminationExponent>> cache;
        const Key key{p, alpha, a, te, cfg.rel_tol};
        std::lock_guard lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto made = std::make_shared<const ContaminationExponent>(p, alpha, a, te, cfg);
        cache.emplace(key, made);
        return made;
    }

private:
    void build() const {
        slope_ = slope();
        coeff_.assign(kNodes, 0.0);
        std::vector<double> values(kNodes);
        const double mid = 0.5 * (kLogMax + kLogMin), half = 0.5 * (kLogMax - kLogMin);
        for (int k = 0; k < kNodes; ++k) {
            const double u = mid + half * std::cos(std::numbers::pi * (k + 0.5) / kNodes);
            values[k] = std::log(-direct(-std::exp(u)));
        }
        for (int j = 0; j < kNodes; ++j) {
            double s = 0.0;
            for (int k = 0; k < kNodes; ++k) s += values[k] * std::cos(std::numbers::pi * j * (k + 0.5) / kNodes);
            coeff_[j] = 2.0 * s / kNodes;
        }
        coeff_[0] *= 0.5;
    }

    double clenshaw(double u) const {
        const double z = (2.0 * u - (kLogMax + kLogMin)) / (kLogMax - kLogMin);
        double b1 = 0.0, b2 = 0.0;
        for (int j = kNodes - 1; j >= 1; --j) {
            const double b0 = 2.0 * z * b1 - b2 + coeff_[j];
            b2 = b1;
            b1 = b0;
        }
        return z * b1 - b2 + coeff_[0];
    }

    double p_, alpha_, a_, te_;
    QuadratureConfig cfg_;
    mutable std::once_flag built_;
    mutable double slope_ = 0.0;
    mutable std::vector<double> coeff_;
};

} // namespace sgmimo
