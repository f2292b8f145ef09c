#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "frontlab/dispersion.hpp"
#include "frontlab/grid.hpp"
#include "frontlab/measure.hpp"
#include "frontlab/nonlinearity.hpp"
#include "frontlab/semiflow.hpp"

namespace frontlab {

struct RecursionConfig {
    /// Time length of one recursion sweep. When c != 0 it is rounded so the
    /// per-sweep displacement c*tau is an integer number of cells whenever
    /// that keeps tau within [tau/2, 2*tau]; otherwise the shift is applied
    /// by interpolation.
    double tau = 0.5;
    int k_floor = 3;       ///< starting k of the 2^{-k} floor
    int k_step = 2;        ///< floor shrinks 4x per level
    long max_iter = 2000;  ///< total sweep budget across all floor levels
    double tol_profile = 1e-6;
    double tol_residual = 1e-3;
    /// Sweeps after the 1/2-crossing first appears before drift accounting
    /// starts (lets the front form and take its initial position).
    int burn_in_sweeps = 50;
    /// Nonconvergence is declared when the crossing moves >= drift_window
    /// cells over any drift_window consecutive post-burn-in sweeps --
    /// a profile translating ballistically instead of settling.
    int drift_window = 50;
    std::optional<double> floor_lambda;  ///< decay rate of the floor; default from the dispersion scan
};

struct WaveResult {
    double c = 0.0;
    GridProfile psi;
    double residual = std::numeric_limits<double>::infinity();
    long iterations = 0;
    bool converged = false;
    int pin_index = -1;
    int k_final = 0;
    std::string message;
};

/// Index of the last node with value <= 1/2, provided the profile straddles
/// that level; monotone input assumed.
inline std::optional<int> crossing_index(const GridProfile& u) {
    if (u.v.front() > 0.5 || u.v.back() <= 0.5) return std::nullopt;
    int lo = 0, hi = u.size() - 1;
    while (lo < hi) {  // v[lo] <= 1/2 < v[hi]
        int mid = (lo + hi + 1) / 2;
        if (u.v[mid] <= 0.5)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

/// Translate by whole cells so the 1/2-level crossing sits at the node
/// nearest x = 0 (values are never re-interpolated). Returns the shifted
/// profile and the applied cell shift.
inline std::pair<GridProfile, int> pin_profile(const GridProfile& u) {
    auto cr = crossing_index(u);
    if (!cr) throw std::invalid_argument("pin_profile: range does not straddle 1/2");
    int shift = u.grid.nearest_index(0.0) - *cr;
    return {translate(u, shift), shift};
}

/// Largest consecutive-node increment and its left index. A genuine
/// discontinuity is only claimed when the magnitude survives grid
/// refinement; any grid function has finite increments.
inline std::pair<double, int> detect_jump(const GridProfile& psi) {
    double best = -std::numeric_limits<double>::infinity();
    int at = 0;
    for (int i = 0; i + 1 < psi.size(); ++i) {
        double inc = psi.v[i + 1] - psi.v[i];
        if (inc > best) {
            best = inc;
            at = i;
        }
    }
    return {best, at};
}

/// Sup over the guard-excluded interior of |c psi' - (mu*psi - psi + f(psi))|
/// with a central difference for psi'. For c = 0 the derivative term is
/// dropped, so discontinuous standing profiles are never differentiated.
inline double wave_residual(const DispersalMeasure& m, const Nonlinearity& f,
                            const GridProfile& psi, double c, int guard_cells) {
    const int n = psi.size();
    const double dx = psi.grid.dx();
    GridProfile g = rhs(m, f, psi);
    const int lo = std::max(guard_cells, 0);
    const int hi = std::min(n - 1 - guard_cells, n - 1);
    double worst = 0.0;
    for (int i = lo; i <= hi; ++i) {
        double r;
        if (c == 0.0) {
            r = g.v[i];
        } else {
            double d;
            if (i == 0)
                d = (psi.v[1] - psi.v[0]) / dx;
            else if (i == n - 1)
                d = (psi.v[n - 1] - psi.v[n - 2]) / dx;
            else
                d = (psi.v[i + 1] - psi.v[i - 1]) / (2.0 * dx);
            r = c * d - g.v[i];
        }
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

inline double wave_residual(const DispersalMeasure& m, const Nonlinearity& f,
                            const GridProfile& psi, double c, const SemiflowConfig& cfg) {
    return wave_residual(m, f, psi, c, resolve_guard(cfg, m, psi.grid));
}

namespace detail {

/// Floor shape w for the recursion: min{e^{lambda0 x}, 1}, except that in
/// the f'(0) > 1 regime the x < 0 branch is zeroed. There the zero state is
/// unstable under the local dynamics -u + f(u), so any everywhere-positive
/// floor ignites the whole left tail and no profile with limit 0 can
/// survive; super-solutions in that regime vanish identically on the left,
/// and so must the floor built from them.
inline GridProfile floor_shape(const Grid& g, double lambda0, bool left_zero) {
    GridProfile w(g, 0.0, 0.0, 1.0);
    for (int i = 0; i < g.n; ++i) {
        double x = g.x(i);
        w.v[i] = x >= 0.0 ? 1.0 : (left_zero ? 0.0 : std::exp(lambda0 * x));
    }
    return w;
}

inline GridProfile scale_profile(const GridProfile& u, double a) {
    GridProfile out(u.grid, 0.0, a * u.left_limit, a * u.right_limit);
    for (int i = 0; i < u.size(); ++i) out.v[i] = a * u.v[i];
    return out;
}

inline double sup_diff_with_limits(const GridProfile& a, const GridProfile& b) {
    double m = std::max(std::abs(a.left_limit - b.left_limit),
                        std::abs(a.right_limit - b.right_limit));
    return std::max(m, sup_norm_diff(a, b));
}

/// max over nodes and limits of (a - b); the (3.2) monotonicity test.
inline double sup_drop(const GridProfile& a, const GridProfile& b) {
    double m = std::max(a.left_limit - b.left_limit, a.right_limit - b.right_limit);
    for (int i = 0; i < a.size(); ++i) m = std::max(m, a.v[i] - b.v[i]);
    return m;
}

}  // namespace detail

/// Fixed-point recursion for a monotone profile traveling at speed c:
///
///   u_0 = 2^{-k} w,   u_n = max( (Q^tau u_{n-1})(. - c tau), 2^{-k} w )
///
/// The sweep sequence is nondecreasing in n (asserted; a drop indicates a
/// broken order-preservation invariant in the semiflow). When a level
/// stabilizes in sup norm the profile is pinned, k is increased and the
/// iteration restarts from the smaller floor; the solve ends when two
/// successive levels give the same pinned profile. Restarting from the
/// floor keeps the per-level monotonicity exact, which a warm start from
/// the previous level cannot (the old floor's tail would have to decay).
///
/// Below the minimal speed no fixed profile exists and the iterates
/// translate without settling; that is detected by crossing drift, escape
/// into the boundary guard zone, or sweep-budget exhaustion, and reported
/// as converged = false.
inline WaveResult weinberger_recursion(const DispersalMeasure& m, const Nonlinearity& f, double c,
                                       const Grid& grid, const SemiflowConfig& flow,
                                       const RecursionConfig& rec) {
    WaveResult res;
    res.c = c;

    const double lambda0 = rec.floor_lambda ? *rec.floor_lambda : floor_decay_rate(m, f);
    const bool left_zero = f.derivative_at_zero() > 1.0;
    const GridProfile w = detail::floor_shape(grid, lambda0, left_zero);
    const int guard = resolve_guard(flow, m, grid);
    const double dx = grid.dx();

    // Align c*tau with the lattice when possible so the sweep shift is
    // exact index arithmetic; otherwise fall back to interpolation.
    double tau = rec.tau;
    int shift_cells = 0;
    bool integer_shift = true;
    if (c != 0.0) {
        double cells = std::round(c * rec.tau / dx);
        double tau_aligned = cells * dx / c;
        if (cells != 0.0 && tau_aligned >= 0.5 * rec.tau && tau_aligned <= 2.0 * rec.tau) {
            tau = tau_aligned;
            shift_cells = static_cast<int>(cells);
        } else {
            integer_shift = false;
        }
    }
    const long steps_per_sweep =
        std::max<long>(1, static_cast<long>(std::ceil(tau / flow.dt - 1e-9)));
    SemiflowConfig sweep_cfg = flow;
    sweep_cfg.dt = tau / steps_per_sweep;

    long total_sweeps = 0;
    std::optional<GridProfile> prev_pinned;

    for (int k = rec.k_floor;; k += rec.k_step) {
        const GridProfile floor_k = detail::scale_profile(w, std::pow(2.0, -k));
        GridProfile u = floor_k;
        res.k_final = k;

        bool level_stable = false;
        long sweeps_this_level = 0;
        long first_crossing_sweep = -1;
        long checkpoint_sweep = -1;
        int checkpoint_cross = 0;

        while (total_sweeps < rec.max_iter) {
            GridProfile v = u;
            for (long s = 0; s < steps_per_sweep; ++s)
                v = step(m, f, v, sweep_cfg.dt, sweep_cfg);
            GridProfile shifted =
                integer_shift ? translate(v, shift_cells) : fractional_translate(v, c * tau);
            GridProfile next = pointwise_max(shifted, floor_k);
            ++total_sweeps;
            ++sweeps_this_level;

            double drop = detail::sup_drop(u, next);
            if (drop > 1e-10)
                throw std::logic_error(
                    "weinberger_recursion: iterate sequence decreased by " + std::to_string(drop));
            double diff = detail::sup_diff_with_limits(next, u);
            u = std::move(next);

            if (auto cr = crossing_index(u)) {
                if (*cr < guard || *cr > grid.n - 1 - guard) {
                    res.message = "front escaped into the boundary guard zone";
                    res.iterations = total_sweeps;
                    return res;
                }
                if (first_crossing_sweep < 0) first_crossing_sweep = sweeps_this_level;
                if (sweeps_this_level >= first_crossing_sweep + rec.burn_in_sweeps) {
                    if (checkpoint_sweep < 0) {
                        checkpoint_sweep = sweeps_this_level;
                        checkpoint_cross = *cr;
                    } else if (sweeps_this_level - checkpoint_sweep >= rec.drift_window) {
                        if (std::abs(*cr - checkpoint_cross) >= rec.drift_window) {
                            res.message = "profile translates without stabilizing";
                            res.iterations = total_sweeps;
                            return res;
                        }
                        checkpoint_sweep = sweeps_this_level;
                        checkpoint_cross = *cr;
                    }
                }
            }

            if (diff <= rec.tol_profile) {
                level_stable = true;
                break;
            }
        }

        res.iterations = total_sweeps;
        if (!level_stable) {
            res.message = "sweep budget exhausted before the iteration stabilized";
            res.psi = u;
            return res;
        }
        if (!crossing_index(u)) {
            res.message = "stabilized iterate does not straddle 1/2";
            res.psi = u;
            return res;
        }

        auto [pinned, shift] = pin_profile(u);
        (void)shift;
        if (prev_pinned && detail::sup_diff_with_limits(pinned, *prev_pinned) <= rec.tol_profile) {
            res.psi = pinned;
            res.pin_index = *crossing_index(pinned);
            res.residual = wave_residual(m, f, pinned, c, guard);
            res.converged = res.residual <= rec.tol_residual;
            if (!res.converged)
                res.message = "fixed profile found but residual exceeds tolerance";
            return res;
        }
        prev_pinned = std::move(pinned);

        if (total_sweeps >= rec.max_iter) {
            res.message = "sweep budget exhausted before floor levels agreed";
            res.psi = *prev_pinned;
            return res;
        }
    }
}

/// Standing-wave solve: the recursion at c = 0. Succeeds exactly when the
/// minimal speed is <= 0.
inline WaveResult standing_wave_solve(const DispersalMeasure& m, const Nonlinearity& f,
                                      const Grid& grid, const SemiflowConfig& flow,
                                      const RecursionConfig& rec) {
    return weinberger_recursion(m, f, 0.0, grid, flow, rec);
}

}  // namespace frontlab
