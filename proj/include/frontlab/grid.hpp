#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace frontlab {

/// Uniform grid on a truncated interval [x_min, x_max] with n nodes.
struct Grid {
    double x_min = -1.0;
    double x_max = 1.0;
    int n = 16;

    Grid() = default;
    Grid(double xmin, double xmax, int nodes) : x_min(xmin), x_max(xmax), n(nodes) {
        if (n < 16) throw std::invalid_argument("Grid: need at least 16 nodes");
        if (!(x_max > x_min)) throw std::invalid_argument("Grid: x_max must exceed x_min");
    }

    double dx() const { return (x_max - x_min) / (n - 1); }
    double x(int i) const { return x_min + i * dx(); }

    /// Index of the node nearest to position x0.
    int nearest_index(double x0) const {
        int i = static_cast<int>(std::lround((x0 - x_min) / dx()));
        return std::clamp(i, 0, n - 1);
    }

    bool operator==(const Grid& o) const {
        return x_min == o.x_min && x_max == o.x_max && n == o.n;
    }
};

/// A function on a Grid together with its declared values at -inf / +inf.
/// Evaluation outside [x_min, x_max] returns the far-field limit of that
/// side; evaluation between nodes is linear interpolation.
struct GridProfile {
    Grid grid;
    std::vector<double> v;
    double left_limit = 0.0;
    double right_limit = 0.0;

    GridProfile() = default;
    GridProfile(Grid g, double fill, double left, double right)
        : grid(g), v(static_cast<size_t>(g.n), fill), left_limit(left), right_limit(right) {}
    GridProfile(Grid g, std::vector<double> values, double left, double right)
        : grid(g), v(std::move(values)), left_limit(left), right_limit(right) {
        if (static_cast<int>(v.size()) != grid.n)
            throw std::invalid_argument("GridProfile: value count does not match grid");
    }

    int size() const { return grid.n; }

    /// Sample at fractional index p (node coordinates: p = (x - x_min)/dx).
    /// p < 0 reads the left limit, p > n-1 the right limit.
    double sample_index(double p) const {
        if (p < 0.0) return left_limit;
        const int last = grid.n - 1;
        if (p > static_cast<double>(last)) return right_limit;
        int j = static_cast<int>(p);
        if (j >= last) return v[last];
        double frac = p - j;
        return v[j] + frac * (v[j + 1] - v[j]);
    }

    double sample_x(double x) const { return sample_index((x - grid.x_min) / grid.dx()); }
};

inline bool is_monotone(const GridProfile& u, double tol = 0.0) {
    for (int i = 0; i + 1 < u.size(); ++i)
        if (u.v[i + 1] < u.v[i] - tol) return false;
    return true;
}

/// Largest decreasing step v_i - v_{i+1} (0 when monotone nondecreasing).
inline double monotonicity_defect(const GridProfile& u) {
    double worst = 0.0;
    for (int i = 0; i + 1 < u.size(); ++i)
        worst = std::max(worst, u.v[i] - u.v[i + 1]);
    return worst;
}

/// Monotone nondecreasing with values and limits in [0,1] and limits
/// consistent with the end values. Such profiles are kept inside the
/// invariant box by the stepper's clamp.
inline bool is_monotone_box(const GridProfile& u) {
    if (u.left_limit < 0.0 || u.right_limit > 1.0) return false;
    if (u.left_limit > u.v.front() || u.v.back() > u.right_limit) return false;
    if (u.v.front() < 0.0 || u.v.back() > 1.0) return false;
    return is_monotone(u);
}

/// Strict class-M profile: monotone, values in [0,1], limits exactly 0 and 1.
inline bool is_class_m(const GridProfile& u) {
    return u.left_limit == 0.0 && u.right_limit == 1.0 && is_monotone_box(u);
}

/// Shift by an integer number of cells, filling from the far-field limits.
/// Realizes u(. - cells*dx): positive cells move the profile rightward.
inline GridProfile translate(const GridProfile& u, int cells) {
    GridProfile out(u.grid, 0.0, u.left_limit, u.right_limit);
    const int n = u.size();
    for (int i = 0; i < n; ++i) {
        int j = i - cells;
        out.v[i] = (j < 0) ? u.left_limit : (j >= n ? u.right_limit : u.v[j]);
    }
    return out;
}

/// Shift by an arbitrary displacement x0 (u(. - x0)) using linear
/// interpolation; snaps to the exact integer-cell path when x0 is within
/// 1e-9 cells of one, so lattice-aligned shifts stay bit-exact. The
/// fractional offset is fixed per call, making the interpolation a convex
/// combination with the same coefficients at every node.
inline GridProfile fractional_translate(const GridProfile& u, double x0) {
    const double s = x0 / u.grid.dx();
    const double s_round = std::round(s);
    if (std::abs(s - s_round) <= 1e-9)
        return translate(u, static_cast<int>(s_round));
    GridProfile out(u.grid, 0.0, u.left_limit, u.right_limit);
    const int cells = static_cast<int>(std::floor(s));
    const double t = s - cells;  // in (0,1)
    const int last = u.size() - 1;
    for (int i = 0; i < u.size(); ++i) {
        int j = i - cells - 1;
        if (j < 0)
            out.v[i] = u.left_limit;
        else if (j >= last)
            out.v[i] = u.right_limit;
        else
            out.v[i] = t * u.v[j] + (1.0 - t) * u.v[j + 1];
    }
    return out;
}

inline double sup_norm_diff(const GridProfile& a, const GridProfile& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("sup_norm_diff: grid mismatch");
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

/// max over nodes of (a_i - b_i); negative when a <= b everywhere.
inline double sup_signed_excess(const GridProfile& a, const GridProfile& b) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < a.size(); ++i) m = std::max(m, a.v[i] - b.v[i]);
    return m;
}

inline GridProfile pointwise_max(const GridProfile& a, const GridProfile& b) {
    if (!(a.grid == b.grid)) throw std::invalid_argument("pointwise_max: grid mismatch");
    GridProfile out(a.grid, 0.0, std::max(a.left_limit, b.left_limit),
                    std::max(a.right_limit, b.right_limit));
    for (int i = 0; i < a.size(); ++i) out.v[i] = std::max(a.v[i], b.v[i]);
    return out;
}

/// Heaviside-type step datum: 0 left of the origin, 1 right of it, 1/2 at
/// a node lying exactly on 0.
inline GridProfile heaviside_profile(const Grid& g) {
    GridProfile u(g, 0.0, 0.0, 1.0);
    for (int i = 0; i < g.n; ++i) {
        double x = g.x(i);
        u.v[i] = x < 0.0 ? 0.0 : (x > 0.0 ? 1.0 : 0.5);
    }
    return u;
}

}  // namespace frontlab
