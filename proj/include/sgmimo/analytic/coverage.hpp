#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sgmimo/analytic/contamination.hpp"
#include "sgmimo/analytic/gamma_approx.hpp"
#include "sgmimo/analytic/terms.hpp"
#include "sgmimo/core/results.hpp"
#include "sgmimo/numerics/parallel.hpp"

namespace sgmimo {

struct AnalyticOptions {
    /// Outer (serving-distance and rate) integrals; inner integrals are one
    /// decade tighter.
    QuadratureConfig quad{1e-7, 1e-13, 500, 1e-10};
    /// Use the tabulated contamination exponent for E2 instead of nested quadrature.
    bool tabulate_e2 = true;
    /// Use the triple-integral Q3 instead of the r_lkjk' ~ r_ljk' simplification.
    bool exact_q3 = false;
    int threads = 1;
};

namespace detail {

/// int_{r0}^inf e^{-pi lambda (x^2 - r0^2)} h(x) 2 pi lambda x dx through
/// y = pi lambda (x^2 - r0^2), truncated where the weight drops below the
/// configured mass.
///
/// At high thresholds h collapses onto x ~ r0, i.e. y below 1e-2; a single
/// panel over [0, y_max] can then miss the mass entirely, so the range is
/// split at decades.
template <class H>
double radial_average(const H& h, const SystemParams& p, const QuadratureConfig& cfg, const char* label) {
    const double pl = std::numbers::pi * p.lambda;
    const double y_max = -std::log(cfg.truncation_mass);
    auto f = [&](double y) { return std::exp(-y) * h(std::sqrt(p.r0 * p.r0 + y / pl)); };
    double total = 0.0, lo = 0.0;
    for (double hi = 1e-6; lo < y_max; hi *= 10.0) {
        hi = std::min(hi, y_max);
        total += integrate(f, lo, hi, cfg, label).value;
        lo = hi;
    }
    return total;
}

/// Runs `term(T, n)` for every threshold and Gamma index and folds the
/// alternating sum, clamping to [0, 1].
template <class Term>
CoverageCurve alternating_curve(const std::vector<double>& thresholds, const SystemParams& p, Method method,
                                std::string_view variant, int threads, const Term& term) {
    const int big_n = p.gamma_shape();
    CoverageCurve out;
    out.thresholds = thresholds;
    out.params = p;
    out.method = method;
    out.variant = variant;
    out.n_gamma = big_n;
    std::vector<double> raw(thresholds.size());
    parallel_for(
        thresholds.size(),
        [&](std::size_t i) {
            const double t = thresholds[i];
            if (!(t >= 0.0)) throw DomainError("thresholds must be non-negative linear SINR values");
            std::vector<double> terms(static_cast<std::size_t>(big_n));
            for (int n = 1; n <= big_n; ++n) {
                try {
                    terms[static_cast<std::size_t>(n - 1)] = term(t, n);
                } catch (const QuadratureError& e) {
                    std::ostringstream os;
                    os << "coverage term (T=" << t << ", n=" << n << "): " << e.what();
                    throw QuadratureError(os.str(), e.estimate(), e.error(), e.subdivisions());
                } catch (const NumericalError& e) {
                    std::ostringstream os;
                    os << "coverage term (T=" << t << ", n=" << n << "): " << e.what();
                    throw NumericalError(os.str());
                }
            }
            raw[i] = alternating_gamma_sum(terms);
        },
        static_cast<unsigned>(std::max(1, threads)));
    out.coverage.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double v = raw[i];
        const double c = std::min(1.0, std::max(0.0, v));
        if (c != v) {
            ++out.clamp_events;
            out.max_clamp = std::max(out.max_clamp, std::abs(v - c));
        }
        out.coverage[i] = c;
    }
    return out;
}

} // namespace detail

/// Coverage probability and ergodic rate under the Gamma-approximated
/// conditional SINR. Q1..Q3 are computed once per instance.
class AnalyticEngine {
public:
    /// exp() of anything below this is zero in double precision.
    static constexpr double kLogUnderflow = -745.2;

    explicit AnalyticEngine(SystemParams params, AnalyticOptions opts = {})
        : p_(std::move(params)), opts_(opts) {
        p_.validate();
        opts_.quad.validate();
        dc_ = derive_constants(p_);
        const QuadratureConfig inner = opts_.quad.nested();
        // Q1 and the simplified Q3 ignore x; any admissible x will do.
        const double x_any = p_.r0 + 0.5 * (p_.r_e - p_.r0);
        q1_ = q1(x_any, p_, inner);
        q2_ = q2(p_);
        if (!opts_.exact_q3) q3_ = q3(x_any, p_, false, inner);
        exponent_ = ContaminationExponent::cached(p_.alpha * p_.eps / 2.0, p_.alpha, scaled_area(p_, p_.r0),
                                                  scaled_area(p_, p_.r_e), inner.nested());
    }

    const SystemParams& params() const { return p_; }
    const DerivedConstants& constants() const { return dc_; }
    double q1_value() const { return q1_; }
    double q2_value() const { return q2_; }
    /// Q3 at x (only the exact form depends on x).
    double q3_value(double x) const {
        return opts_.exact_q3 ? q3(x, p_, true, opts_.quad.nested()) : q3_;
    }

    double c1(double x) const { return sgmimo::c1(x, p_, q1_, q2_, q3_value(x), dc_); }
    Coefficients coefficients(double t, int n, double x) const {
        return sgmimo::coefficients(t, n, x, p_, q1_, dc_);
    }

    /// log E1 = int_{pi lambda x^2}^inf [exp(B R_e^-a t^-a/2 + C R_e^-2a t^-a) - 1] dt.
    double log_e1(double t, int n, double x) const {
        const Coefficients k = coefficients(t, n, x);
        return log_e1(k, x);
    }
    double e1(double t, int n, double x) const { return std::exp(log_e1(t, n, x)); }

    /// log E2 = m * phi(D R_e^(-alpha (1 - eps))).
    double log_e2(double t, int n, double x) const { return log_e2(coefficients(t, n, x)); }
    double e2(double t, int n, double x) const { return std::exp(log_e2(t, n, x)); }
    double e2_direct(double t, int n, double x) const {
        return std::exp(e2_multiplier() * exponent_->direct(scaled_d(coefficients(t, n, x))));
    }

    /// C1 E1 E2 at (T, n, x).
    double conditional(double t, int n, double x) const {
        const Coefficients k = coefficients(t, n, x);
        const double c1_term = t == 0.0 ? 0.0 : -dc_.eta * n * t * c1(x);
        // E1, E2 <= 1, so nothing is left to compute once the deterministic
        // factor underflows (and E1 need not converge that far out).
        if (c1_term < kLogUnderflow) return 0.0;
        return std::exp(c1_term + log_e1(k, x) + log_e2(k));
    }

    /// n-th term of the alternating sum at threshold T.
    double coverage_term(double t, int n) const {
        return detail::radial_average([&](double x) { return conditional(t, n, x); }, p_, opts_.quad,
                                      "coverage radial integral");
    }

    CoverageCurve coverage(const std::vector<double>& thresholds) const {
        return detail::alternating_curve(thresholds, p_, Method::analytic, "general", opts_.threads,
                                         [&](double t, int n) { return coverage_term(t, n); });
    }
    double coverage(double t) const { return coverage(std::vector<double>{t}).coverage.front(); }

    /// (N_p N_d / N_tot) E[log2(1 + SINR)] through int P(SINR > t) / ((1 + t) ln 2) dt.
    RateResult ergodic_rate() const {
        const int big_n = p_.gamma_shape();
        const QuadratureConfig inner = opts_.quad.nested();
        std::vector<double> terms(static_cast<std::size_t>(big_n));
        parallel_for(
            terms.size(),
            [&](std::size_t i) {
                const int n = static_cast<int>(i) + 1;
                auto h = [&](double x) {
                    auto g = [&](double t) { return conditional(t, n, x) / (1.0 + t); };
                    return integrate_to_infinity(g, 0.0, inner, "rate threshold integral").value;
                };
                terms[i] = detail::radial_average(h, p_, opts_.quad, "rate radial integral");
            },
            static_cast<unsigned>(std::max(1, opts_.threads)));
        RateResult r;
        r.rate = std::max(0.0, p_.n_p() * p_.n_d() / p_.n_tot() * alternating_sum(terms) / std::numbers::ln2);
        r.method = Method::analytic;
        r.params = p_;
        r.n_gamma = big_n;
        return r;
    }

    double e2_multiplier() const { return p_.mode == Mode::asynchronous ? p_.n_p() : 1.0; }
    double scaled_d(const Coefficients& k) const { return k.d * std::pow(p_.r_e, -p_.alpha * (1.0 - p_.eps)); }
    const ContaminationExponent& contamination() const { return *exponent_; }

private:
    double log_e1(const Coefficients& k, double x) const {
        if (k.b == 0.0 && k.c == 0.0) return 0.0;
        const double b = k.b * std::pow(p_.r_e, -p_.alpha);
        const double c = k.c * std::pow(p_.r_e, -2.0 * p_.alpha);
        const double h = p_.alpha / 2.0;
        auto f = [&](double t) { return std::expm1(b * std::pow(t, -h) + c * std::pow(t, -p_.alpha)); };
        return integrate_to_infinity(f, scaled_area(p_, x), opts_.quad.nested(), "E1 Campbell integral").value;
    }

    double log_e2(const Coefficients& k) const {
        const double d = scaled_d(k);
        if (d == 0.0) return 0.0;
        const double phi = opts_.tabulate_e2 ? (*exponent_)(d) : exponent_->direct(d);
        return e2_multiplier() * phi;
    }

    SystemParams p_;
    AnalyticOptions opts_;
    DerivedConstants dc_{};
    double q1_ = 0.0, q2_ = 0.0, q3_ = 0.0;
    std::shared_ptr<const ContaminationExponent> exponent_;
};

inline CoverageCurve coverage(const std::vector<double>& thresholds, const SystemParams& p,
                              const AnalyticOptions& opts = {}) {
    return AnalyticEngine(p, opts).coverage(thresholds);
}

inline RateResult ergodic_rate(const SystemParams& p, const AnalyticOptions& opts = {}) {
    return AnalyticEngine(p, opts).ergodic_rate();
}

/// Asynchronous operation with eps = 1: only the uplink interference of
/// frame-offset neighbours is kept.
inline CoverageCurve coverage_fullpc_async(const std::vector<double>& thresholds, const SystemParams& p,
                                           const AnalyticOptions& opts = {}) {
    p.validate();
    if (p.mode != Mode::asynchronous) throw DomainError("full power-control form is asynchronous only");
    if (p.eps != 1.0) throw DomainError("full power-control form needs eps = 1");
    const QuadratureConfig inner = opts.quad.nested();
    const DerivedConstants dc = derive_constants(p);
    const double x_any = p.r0 + 0.5 * (p.r_e - p.r0);
    const double q1v = q1(x_any, p, inner);
    const double q3_fixed = opts.exact_q3 ? 0.0 : q3(x_any, p, false, inner);
    const double scale = p.p_u * p.n_d() * (p.n_p() + p.n_u()) /
                         (p.p_d * std::pow(p.omega, p.eps) * dc.c_m * dc.c_m * p.n_tot() * p.n_tot());
    auto term = [&](double t, int n) {
        auto h = [&](double x) {
            const double lead = std::pow(x, p.alpha) + std::pow(x, p.alpha * (2.0 - p.eps)) * q1v;
            const double q3v = opts.exact_q3 ? q3(x, p, true, inner) : q3_fixed;
            return std::exp(-dc.eta * n * t * lead * scale * q3v);
        };
        return detail::radial_average(h, p, opts.quad, "full power-control radial integral");
    };
    return detail::alternating_curve(thresholds, p, Method::analytic_special, "full-pc-async", opts.threads, term);
}

/// M -> infinity: only the coherent pilot-contamination term survives.
inline CoverageCurve coverage_infinite_m(const std::vector<double>& thresholds, const SystemParams& p,
                                         const AnalyticOptions& opts = {}) {
    p.validate();
    const QuadratureConfig inner = opts.quad.nested();
    const double eta_n = eta(p.gamma_shape());
    const double pl = std::numbers::pi * p.lambda;
    const double ntot2 = p.n_tot() * p.n_tot();
    const double factor = p.mode == Mode::asynchronous
                              ? p.n_p() * p.n_d() * p.n_d() * (p.n_p() + p.n_u()) / (ntot2 * ntot2)
                              : 1.0;
    auto term = [&](double t, int n) {
        auto h = [&](double x) {
            // (M - 1) / C_M^2 -> 1.
            const double c = -eta_n * n * t * factor * std::pow(x, 2.0 * p.alpha);
            if (c == 0.0) return 1.0;
            auto g = [&](double r) { return std::expm1(c * std::pow(r, -2.0 * p.alpha)) * 2.0 * pl * r; };
            return std::exp(integrate_to_infinity(g, x, inner, "infinite-M Campbell integral").value);
        };
        return detail::radial_average(h, p, opts.quad, "infinite-M radial integral");
    };
    return detail::alternating_curve(thresholds, p, Method::analytic_special, "infinite-m", opts.threads, term);
}

/// eps = 0: the contamination exponent reduces to a single integral.
inline CoverageCurve coverage_no_pc(const std::vector<double>& thresholds, const SystemParams& p,
                                    const AnalyticOptions& opts = {}) {
    if (p.eps != 0.0) throw DomainError("no power-control form needs eps = 0");
    const AnalyticEngine engine(p, opts);
    const QuadratureConfig inner = opts.quad.nested();
    const double re_a = std::pow(p.r_e, -p.alpha);
    const double te = scaled_area(p, p.r_e);
    auto term = [&](double t, int n) {
        auto h = [&](double x) {
            const Coefficients k = engine.coefficients(t, n, x);
            if (t == 0.0) return 1.0;
            auto g = [&](double s) { return std::expm1(k.d * re_a * std::pow(s, -p.alpha / 2.0)); };
            const double e2 = engine.e2_multiplier() * integrate_to_infinity(g, te, inner, "no-pc E2").value;
            return std::exp(-engine.constants().eta * n * t * engine.c1(x) + e2 + engine.log_e1(t, n, x));
        };
        return detail::radial_average(h, p, opts.quad, "no-pc radial integral");
    };
    return detail::alternating_curve(thresholds, p, Method::analytic_special, "no-pc", opts.threads, term);
}

} // namespace sgmimo
