#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontlab/dispersion.hpp"
#include "frontlab/grid.hpp"
#include "frontlab/measure.hpp"
#include "frontlab/nonlinearity.hpp"
#include "frontlab/semiflow.hpp"
#include "frontlab/waves.hpp"

namespace frontlab {

/// Super-solution cap on the minimal speed: min over the supplied lambda of
/// K(lambda)/lambda with K = max{mgf, 1} - 1 + sup_{h>0} f(h)/h.
struct UpperBound {
    double bound;
    double lambda;
};

inline UpperBound upper_bound(const DispersalMeasure& m, const Nonlinearity& f,
                              const std::vector<double>& lambdas) {
    if (lambdas.empty()) throw std::invalid_argument("upper_bound: empty lambda list");
    const double sup_slope = f.sup_slope_from_zero();
    UpperBound best{std::numeric_limits<double>::infinity(), 0.0};
    for (double lam : lambdas) {
        if (!(lam > 0.0)) throw std::invalid_argument("upper_bound: lambda must be positive");
        double k = std::max(m.mgf(lam), 1.0) - 1.0 + sup_slope;
        double b = k / lam;
        if (std::isfinite(b) && b < best.bound) best = {b, lam};
    }
    return best;
}

/// Certificate that the minimal speed is negative (requires a measure with
/// positive mean displacement). xi minimizes mgf over (0, lambda_max];
/// gamma_max = 1 - mgf(xi) is the reaction-slope threshold below which the
/// certificate applies. When f passes the slope gate, K = mgf - 1 +
/// sup_slope(f) lies in (-1, 0) and c* <= K/xi < 0. Otherwise K and the
/// bound are reported for the threshold slope itself (degenerate, 0) with
/// applies_to_f = false.
struct NegativeSpeedCertificate {
    double xi = 0.0;
    double gamma_max = 0.0;
    double K = 0.0;
    double bound = 0.0;
    bool applies_to_f = false;
    double mgf_at_xi = 1.0;
    double f_sup_slope = 0.0;
};

inline NegativeSpeedCertificate negative_speed_certificate(const DispersalMeasure& m,
                                                           const Nonlinearity& f,
                                                           double lambda_max = 1.0,
                                                           int scan_points = 2048) {
    if (!(m.mean_displacement() > 0.0))
        throw std::domain_error("negative_speed_certificate: mean displacement not positive");
    if (!(lambda_max > 0.0))
        throw std::invalid_argument("negative_speed_certificate: lambda_max must be positive");

    auto g = [&m](double xi) { return m.mgf(xi); };
    int best = 0;
    std::vector<double> xs(static_cast<size_t>(scan_points));
    for (int i = 0; i < scan_points; ++i) {
        xs[i] = lambda_max * (i + 1) / scan_points;
        if (g(xs[i]) < g(xs[best])) best = i;
    }
    double xi;
    if (best == scan_points - 1) {
        xi = lambda_max;  // mgf still decreasing at the admissible edge
    } else {
        double a = xs[std::max(best - 1, 0)];
        double b = xs[best + 1];
        xi = detail::golden_minimize(g, a, b);
    }

    NegativeSpeedCertificate cert;
    cert.xi = xi;
    cert.mgf_at_xi = g(xi);
    if (!(cert.mgf_at_xi < 1.0))
        throw std::domain_error("negative_speed_certificate: mgf >= 1 on the scanned range");
    cert.gamma_max = 1.0 - cert.mgf_at_xi;
    cert.f_sup_slope = f.sup_slope_from_zero();
    cert.applies_to_f = cert.f_sup_slope <= cert.gamma_max;
    double gamma = cert.applies_to_f ? cert.f_sup_slope : cert.gamma_max;
    cert.K = cert.mgf_at_xi - 1.0 + gamma;
    cert.bound = cert.K / cert.xi;
    return cert;
}

/// Measured spreading speed: evolve the step datum, track the interpolated
/// 1/2-level position and fit a line to it after the burn-in window. The
/// level of a solution psi(x + c t) sits at x(t) = x(0) - c t, so the speed
/// is minus the fitted slope.
struct SpreadingResult {
    double c = 0.0;
    double r_squared = 0.0;
    bool fit_ok = false;
    std::vector<std::pair<double, double>> track;  ///< (t, x_half)
};

inline double front_position(const GridProfile& u) {
    auto cr = crossing_index(u);
    if (!cr) throw std::runtime_error("front_position: profile does not straddle 1/2");
    int j = *cr;
    double xj = u.grid.x(j);
    if (j + 1 >= u.size()) return xj;
    double vj = u.v[j], vn = u.v[j + 1];
    if (vn <= vj) return xj;
    return xj + u.grid.dx() * (0.5 - vj) / (vn - vj);
}

inline SpreadingResult spreading_speed(const DispersalMeasure& m, const Nonlinearity& f,
                                       const Grid& grid, double T, const SemiflowConfig& cfg,
                                       double burn_in_fraction = 0.3) {
    if (!(T > 0.0)) throw std::invalid_argument("spreading_speed: T must be positive");
    const int guard = resolve_guard(cfg, m, grid);
    GridProfile u = heaviside_profile(grid);
    SpreadingResult res;
    const long steps = static_cast<long>(std::ceil(T / cfg.dt - 1e-9));
    const double dt = T / steps;
    res.track.reserve(steps + 1);
    double t = 0.0;
    auto record = [&]() {
        auto cr = crossing_index(u);
        if (!cr || *cr < guard || *cr > grid.n - 1 - guard)
            throw std::runtime_error("spreading_speed: front reached the guard zone (domain too small)");
        res.track.emplace_back(t, front_position(u));
    };
    record();
    for (long s = 0; s < steps; ++s) {
        u = step(m, f, u, dt, cfg);
        t = (s + 1) * dt;
        record();
    }

    // least-squares line over the post-burn-in window
    const double t0 = burn_in_fraction * T;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    long cnt = 0;
    for (const auto& [ti, xi] : res.track) {
        if (ti < t0) continue;
        sx += ti;
        sy += xi;
        sxx += ti * ti;
        sxy += ti * xi;
        syy += xi * xi;
        ++cnt;
    }
    if (cnt < 2) throw std::runtime_error("spreading_speed: fit window too short");
    double denom = cnt * sxx - sx * sx;
    double slope = (cnt * sxy - sx * sy) / denom;
    res.c = -slope;
    double ss_tot = syy - sy * sy / cnt;
    double intercept = (sy - slope * sx) / cnt;
    double ss_res = 0.0;
    for (const auto& [ti, xi] : res.track) {
        if (ti < t0) continue;
        double e = xi - (intercept + slope * ti);
        ss_res += e * e;
    }
    res.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    res.fit_ok = res.r_squared >= 0.999;
    return res;
}

/// Bisect the minimal speed on recursion success. Requires a valid bracket:
/// the profile solve fails at c_lo and succeeds at c_hi.
inline double bisect_c_star(const DispersalMeasure& m, const Nonlinearity& f, double c_lo,
                            double c_hi, double tol, const Grid& grid, const SemiflowConfig& flow,
                            const RecursionConfig& rec) {
    if (!(tol > 0.0)) throw std::invalid_argument("bisect_c_star: tol must be positive");
    if (c_lo == c_hi) return c_lo;
    if (c_lo > c_hi) throw std::invalid_argument("bisect_c_star: c_lo exceeds c_hi");
    auto succeeds = [&](double c) { return weinberger_recursion(m, f, c, grid, flow, rec).converged; };
    if (succeeds(c_lo))
        throw std::invalid_argument("bisect_c_star: recursion already succeeds at c_lo");
    if (!succeeds(c_hi))
        throw std::invalid_argument("bisect_c_star: recursion fails at c_hi");
    while (c_hi - c_lo > tol) {
        double mid = 0.5 * (c_lo + c_hi);
        if (succeeds(mid))
            c_hi = mid;
        else
            c_lo = mid;
    }
    return 0.5 * (c_lo + c_hi);
}

/// Bundle of every estimator that applies to a scenario, plus the ordering
/// diagnostics between them.
struct SpeedReport {
    std::optional<DispersionResult> dispersion;
    std::string dispersion_error;
    std::optional<UpperBound> upper;
    std::optional<SpreadingResult> spreading;
    std::string spreading_error;
    std::optional<double> c_bisection;
    std::string bisection_error;
    std::optional<NegativeSpeedCertificate> certificate;
    std::string certificate_error;
    bool linearly_determinate = false;
    double agreement = 0.0;  ///< max pairwise gap among available estimates
    bool chain_ok = true;
    std::string chain_note;
};

struct SpeedReportOptions {
    std::optional<std::pair<double, double>> bisect_bracket;
    double bisect_tol = 0.05;
    double spreading_T = 0.0;  ///< 0 disables the measured speed
    double chain_tol = 0.05;
    double certificate_lambda_max = 1.0;
};

inline SpeedReport build_speed_report(const DispersalMeasure& m, const Nonlinearity& f,
                                      const Grid& grid, const SemiflowConfig& flow,
                                      const RecursionConfig& rec, const SpeedReportOptions& opt) {
    SpeedReport rep;
    rep.linearly_determinate = f.linearly_determinate_by_sampling();

    try {
        rep.dispersion = dispersion_speed(m, f);
    } catch (const std::exception& e) {
        rep.dispersion_error = e.what();
    }

    if (rep.dispersion) {
        std::vector<double> lams;
        lams.reserve(rep.dispersion->scan.size());
        for (const auto& p : rep.dispersion->scan) lams.push_back(p.lambda);
        rep.upper = upper_bound(m, f, lams);
    }

    if (opt.spreading_T > 0.0) {
        try {
            rep.spreading = spreading_speed(m, f, grid, opt.spreading_T, flow);
        } catch (const std::exception& e) {
            rep.spreading_error = e.what();
        }
    }

    if (opt.bisect_bracket) {
        try {
            rep.c_bisection = bisect_c_star(m, f, opt.bisect_bracket->first,
                                            opt.bisect_bracket->second, opt.bisect_tol, grid,
                                            flow, rec);
        } catch (const std::exception& e) {
            rep.bisection_error = e.what();
        }
    }

    try {
        rep.certificate = negative_speed_certificate(m, f, opt.certificate_lambda_max);
    } catch (const std::exception& e) {
        rep.certificate_error = e.what();
    }

    // ordering chain between the estimates that exist
    if (rep.c_bisection) {
        if (rep.upper && *rep.c_bisection > rep.upper->bound + opt.chain_tol) {
            rep.chain_ok = false;
            rep.chain_note = "bisection estimate exceeds the super-solution upper bound";
        }
        if (rep.linearly_determinate && rep.dispersion &&
            *rep.c_bisection < rep.dispersion->c - opt.chain_tol) {
            rep.chain_ok = false;
            rep.chain_note = "bisection estimate falls below the dispersion speed";
        }
    }

    std::vector<double> estimates;
    if (rep.dispersion && rep.dispersion->attained) estimates.push_back(rep.dispersion->c);
    if (rep.spreading) estimates.push_back(rep.spreading->c);
    if (rep.c_bisection) estimates.push_back(*rep.c_bisection);
    for (size_t i = 0; i < estimates.size(); ++i)
        for (size_t j = i + 1; j < estimates.size(); ++j)
            rep.agreement = std::max(rep.agreement, std::abs(estimates[i] - estimates[j]));

    return rep;
}

}  // namespace frontlab
