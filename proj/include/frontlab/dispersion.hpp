#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "frontlab/measure.hpp"
#include "frontlab/nonlinearity.hpp"

namespace frontlab {

/// One row of the lambda scan: the linearized front speed c(lambda) and the
/// super-solution bound K(lambda)/lambda at the same decay rate.
struct ScanPoint {
    double lambda;
    double c_lambda;
    double upper_lambda;
};

struct DispersionResult {
    double c = 0.0;
    double lambda_star = 0.0;
    /// False when the infimum is only approached at the end of the scanned
    /// interval (the value reported is then the boundary value, and
    /// bisection is the authoritative estimate).
    bool attained = false;
    double lambda_max = 0.0;
    std::vector<ScanPoint> scan;
};

namespace detail {

/// Largest admissible decay rate: exp_moment(m, lambda) <= 1e12, capped at
/// 1e4 for measures whose moment never gets there (e.g. a single atom at 0).
inline double lambda_scan_limit(const DispersalMeasure& m) {
    const double cap = 1e4;
    const double budget = 1e12;
    if (m.exp_moment(cap) <= budget) return cap;
    double lo = 0.0, hi = cap;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double em = m.exp_moment(mid);
        if (std::isfinite(em) && em <= budget)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

inline double golden_minimize(const std::function<double(double)>& g, double a, double b) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = g(c), fd = g(d);
    while (b - a > 1e-8 * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = g(d);
        }
    }
    return fc <= fd ? c : d;
}

}  // namespace detail

/// Minimize c(lambda) = (mgf(m,lambda) - 1 + f'(0)) / lambda over the
/// admissible interval: 2048 log-spaced scan points refined by golden
/// section. Boundary infima are reported at the scan end and flagged.
inline DispersionResult dispersion_speed(const DispersalMeasure& m, const Nonlinearity& f,
                                         int scan_points = 2048) {
    const double fp0 = f.derivative_at_zero();
    if (!(fp0 > 0.0))
        throw std::invalid_argument("dispersion: requires f'(0) > 0");
    DispersionResult res;
    res.lambda_max = detail::lambda_scan_limit(m);
    if (!(res.lambda_max > 0.0))
        throw std::runtime_error("dispersion: no admissible lambda (moment overflows)");

    const double sup_slope = f.sup_slope_from_zero();
    auto c_of = [&](double lam) { return (m.mgf(lam) - 1.0 + fp0) / lam; };
    auto upper_of = [&](double lam) {
        return (std::max(m.mgf(lam), 1.0) - 1.0 + sup_slope) / lam;
    };

    const double lam_lo = res.lambda_max * 1e-6;
    const double ratio = std::log(res.lambda_max / lam_lo);
    res.scan.reserve(scan_points);
    int best = 0;
    for (int i = 0; i < scan_points; ++i) {
        double lam = lam_lo * std::exp(ratio * i / (scan_points - 1));
        double c = c_of(lam);
        res.scan.push_back({lam, c, upper_of(lam)});
        if (std::isfinite(c) && c < res.scan[best].c_lambda) best = i;
    }
    if (!std::isfinite(res.scan[best].c_lambda))
        throw std::runtime_error("dispersion: scan produced no finite values");

    if (best == scan_points - 1) {
        // monotone decreasing up to the admissible edge
        res.attained = false;
        res.lambda_star = res.lambda_max;
        res.c = c_of(res.lambda_max);
    } else {
        double a = res.scan[std::max(best - 1, 0)].lambda;
        double b = res.scan[best + 1].lambda;
        res.lambda_star = detail::golden_minimize(c_of, a, b);
        res.c = c_of(res.lambda_star);
        res.attained = best > 0;
        if (!res.attained) {  // edge of the scan on the small-lambda side
            res.lambda_star = res.scan[0].lambda;
            res.c = res.scan[0].c_lambda;
        }
    }
    return res;
}

/// Decay rate used for the recursion's floor profile: the minimizer of the
/// dispersion scan (boundary argmin included -- a steep floor travels slower
/// than any profile it must stay under). Falls back to 1 when linearization
/// at 0 is unavailable.
inline double floor_decay_rate(const DispersalMeasure& m, const Nonlinearity& f) {
    if (!(f.derivative_at_zero() > 0.0)) return 1.0;
    try {
        return dispersion_speed(m, f).lambda_star;
    } catch (const std::exception&) {
        return 1.0;
    }
}

}  // namespace frontlab
