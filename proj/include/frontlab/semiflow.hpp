#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "frontlab/grid.hpp"
#include "frontlab/measure.hpp"
#include "frontlab/nonlinearity.hpp"

namespace frontlab {

enum class Stepper { rk4, euler };

struct SemiflowConfig {
    double dt = 0.05;
    Stepper stepper = Stepper::rk4;
    /// Cells excluded from diagnostics near each boundary; unset means
    /// ceil(range(mu)/dx) + 4, the contamination depth of one unit of time.
    std::optional<int> boundary_guard;
    bool enforce_stability_guard = true;
};

inline int resolve_guard(const SemiflowConfig& cfg, const DispersalMeasure& m, const Grid& g) {
    if (cfg.boundary_guard) {
        if (*cfg.boundary_guard < 0)
            throw std::invalid_argument("semiflow: boundary_guard must be nonnegative");
        return *cfg.boundary_guard;
    }
    return static_cast<int>(std::ceil(m.range() / g.dx())) + 4;
}

/// dt * (K_f + 1) <= 1/2 with K_f the comparison constant: keeps both
/// steppers inside the contraction budget the comparison tests assume.
inline bool stability_guard_ok(double dt, const Nonlinearity& f) {
    return dt * (f.comparison_constant() + 1.0) <= 0.5 + 1e-12;
}

struct EvolveStats {
    double max_clamp_correction = 0.0;
    double max_monotonicity_violation = 0.0;
    long steps = 0;
};

/// Right-hand side G(u) = mu*u - u + f(u). The far-field limits of the
/// result are f(limit), which vanish at the equilibria 0 and 1.
inline GridProfile rhs(const DispersalMeasure& m, const Nonlinearity& f, const GridProfile& u) {
    GridProfile out = m.convolve(u);
    for (int i = 0; i < u.size(); ++i) out.v[i] += -u.v[i] + f.eval(u.v[i]);
    out.left_limit = f.eval(u.left_limit);
    out.right_limit = f.eval(u.right_limit);
    return out;
}

namespace detail {

inline GridProfile axpy(const GridProfile& u, double a, const GridProfile& g) {
    GridProfile out(u.grid, 0.0, u.left_limit + a * g.left_limit,
                    u.right_limit + a * g.right_limit);
    for (int i = 0; i < u.size(); ++i) out.v[i] = u.v[i] + a * g.v[i];
    return out;
}

/// Project a monotone-box trajectory back onto [0,1] and re-monotonize by a
/// running maximum. The stepper can overshoot the invariant sets by its
/// truncation order; the correction sizes are recorded so tests can insist
/// they stay at round-off scale.
inline void clamp_monotone_box(GridProfile& u, EvolveStats* stats) {
    double clamp_corr = 0.0;
    double mono_viol = 0.0;
    auto box = [&](double& x) {
        double c = x < 0.0 ? -x : (x > 1.0 ? x - 1.0 : 0.0);
        clamp_corr = std::max(clamp_corr, c);
        x = std::min(std::max(x, 0.0), 1.0);
    };
    box(u.left_limit);
    box(u.right_limit);
    double running = -std::numeric_limits<double>::infinity();
    for (double& x : u.v) {
        box(x);
        if (x < running) {
            mono_viol = std::max(mono_viol, running - x);
            x = running;
        }
        running = x;
    }
    if (stats) {
        stats->max_clamp_correction = std::max(stats->max_clamp_correction, clamp_corr);
        stats->max_monotonicity_violation = std::max(stats->max_monotonicity_violation, mono_viol);
    }
}

}  // namespace detail

/// One explicit step of du/dt = G(u). Monotone inputs inside the unit box
/// come back clamped to it (see clamp_monotone_box); general profiles are
/// stepped as-is.
inline GridProfile step(const DispersalMeasure& m, const Nonlinearity& f, const GridProfile& u,
                        double dt, const SemiflowConfig& cfg, EvolveStats* stats = nullptr) {
    if (cfg.enforce_stability_guard && !stability_guard_ok(dt, f))
        throw std::runtime_error("semiflow: dt violates the stability guard dt*(K+1) <= 1/2");
    const bool keep_box = is_monotone_box(u);
    GridProfile out(u.grid, 0.0, 0.0, 0.0);
    if (cfg.stepper == Stepper::euler) {
        GridProfile k1 = rhs(m, f, u);
        out = detail::axpy(u, dt, k1);
    } else {
        GridProfile k1 = rhs(m, f, u);
        GridProfile k2 = rhs(m, f, detail::axpy(u, 0.5 * dt, k1));
        GridProfile k3 = rhs(m, f, detail::axpy(u, 0.5 * dt, k2));
        GridProfile k4 = rhs(m, f, detail::axpy(u, dt, k3));
        out = u;
        for (int i = 0; i < u.size(); ++i)
            out.v[i] += dt / 6.0 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
        out.left_limit +=
            dt / 6.0 * (k1.left_limit + 2.0 * k2.left_limit + 2.0 * k3.left_limit + k4.left_limit);
        out.right_limit += dt / 6.0 * (k1.right_limit + 2.0 * k2.right_limit +
                                       2.0 * k3.right_limit + k4.right_limit);
    }
    if (keep_box) detail::clamp_monotone_box(out, stats);
    if (stats) stats->steps += 1;
    return out;
}

/// Q^T[u0] by repeated stepping: floor(T/dt) full steps plus one remainder
/// step, so the semigroup identity is exact when the times are multiples
/// of dt.
inline GridProfile evolve(const DispersalMeasure& m, const Nonlinearity& f, GridProfile u,
                          double T, const SemiflowConfig& cfg, EvolveStats* stats = nullptr) {
    if (T < 0.0) throw std::invalid_argument("evolve: T must be nonnegative");
    const long full = static_cast<long>(std::floor(T / cfg.dt + 1e-9));
    for (long s = 0; s < full; ++s) u = step(m, f, u, cfg.dt, cfg, stats);
    const double rem = T - full * cfg.dt;
    if (rem > 1e-12) u = step(m, f, u, rem, cfg, stats);
    return u;
}

}  // namespace frontlab
