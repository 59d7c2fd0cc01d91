#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "sgmimo/core/errors.hpp"

namespace sgmimo {

struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    int max_subdivisions = 500;
    /// Tail cutoff for integrals truncated on a decaying weight.
    double truncation_mass = 1e-10;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("quadrature tolerances must be positive");
        if (max_subdivisions < 1) throw ConfigError("quadrature max_subdivisions must be >= 1");
        if (!(truncation_mass > 0.0) || truncation_mass > 1e-8)
            throw ConfigError("quadrature truncation_mass must lie in (0, 1e-8]");
    }

    /// Same tolerances scaled for an integral nested inside another one.
    QuadratureConfig nested(double factor = 0.1) const {
        QuadratureConfig c = *this;
        c.rel_tol *= factor;
        c.abs_tol *= factor;
        return c;
    }
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    int subdivisions = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(const F& f, double a, double b, const char* label) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::abs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        fv1[j] = f(centre - dx);
        fv2[j] = f(centre + dx);
        const double s = fv1[j] + fv2[j];
        resk += kWgk[j] * s;
        resabs += kWgk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * s;
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double result = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double epmach = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    if (resabs > uflow / (50.0 * epmach)) err = std::max(epmach * 50.0 * resabs, err);
    if (!std::isfinite(result)) {
        std::ostringstream os;
        os << "non-finite integrand in " << label << " on [" << a << ", " << b << "]";
        throw NumericalError(os.str());
    }
    return {a, b, result, err};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature of f over the finite [a, b].
template <class F>
QuadResult integrate(const F& f, double a, double b, const QuadratureConfig& cfg = {},
                     const char* label = "integral") {
    QuadResult out;
    if (a == b) return out;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::priority_queue<detail::Panel> open;
    std::vector<detail::Panel> done;
    const detail::Panel first = detail::gk15(f, a, b, label);
    out.evaluations = 15;
    double total = first.value;
    double total_err = first.error;
    open.push(first);

    auto tolerance = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
    while (total_err > tolerance()) {
        if (open.empty()) break;
        if (out.subdivisions >= cfg.max_subdivisions) {
            std::ostringstream os;
            os << label << ": no convergence after " << out.subdivisions << " subdivisions on [" << a
               << ", " << b << "], estimate " << total << " +/- " << total_err;
            throw QuadratureError(os.str(), total, total_err, out.subdivisions);
        }
        const detail::Panel worst = open.top();
        open.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) < 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(mid))) {
            // Cannot be refined further in double precision.
            done.push_back(worst);
            continue;
        }
        const detail::Panel left = detail::gk15(f, worst.a, mid, label);
        const detail::Panel right = detail::gk15(f, mid, worst.b, label);
        out.evaluations += 30;
        ++out.subdivisions;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        open.push(left);
        open.push(right);
    }

    while (!open.empty()) {
        done.push_back(open.top());
        open.pop();
    }
    // Fixed summation order: left to right.
    std::sort(done.begin(), done.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    double sum = 0.0, err = 0.0;
    for (const auto& p : done) {
        sum += p.value;
        err += p.error;
    }
    out.value = sign * sum;
    out.error = err;
    return out;
}

/// Integral of f over [a, inf) through t = a + (1 - u) / u.
template <class F>
QuadResult integrate_to_infinity(const F& f, double a, const QuadratureConfig& cfg = {},
                                 const char* label = "improper integral") {
    auto mapped = [&](double u) {
        const double w = (1.0 - u) / u;
        return f(a + w) / (u * u);
    };
    return integrate(mapped, 0.0, 1.0, cfg, label);
}

/// Nested integral  int_a^b int_{lo(x)}^{hi(x)} f(x, y) dy dx.
template <class F, class Lo, class Hi>
QuadResult integrate_2d(const F& f, double a, double b, const Lo& lo, const Hi& hi,
                        const QuadratureConfig& cfg = {}, const char* label = "double integral") {
    const QuadratureConfig inner = cfg.nested();
    auto row = [&](double x) {
        auto g = [&](double y) { return f(x, y); };
        return integrate(g, lo(x), hi(x), inner, label).value;
    };
    return integrate(row, a, b, cfg, label);
}

/// Smallest x >= x0 with exp(-c (x^2 - x0^2)) <= mass, i.e. the truncation
/// point of a Rayleigh-type weight.
inline double gaussian_truncation(double x0, double c, double mass) {
    return std::sqrt(x0 * x0 - std::log(mass) / c);
}

} // namespace sgmimo
