#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "frontlab/grid.hpp"

namespace frontlab {

/// Probability measure governing the nonlocal transport mu*u. Holds a list
/// of weighted atoms plus an optional quadrature discretization of an
/// absolutely continuous part, so convolution is a single weighted-sum code
/// path for both. Total mass is renormalized to 1 at construction; the size
/// of the applied correction is recorded.
///
/// Immutable after construction; safe to share across threads.
class DispersalMeasure {
public:
    struct Atom {
        double y;
        double w;
    };

    static DispersalMeasure from_atoms(std::vector<Atom> atoms) {
        return DispersalMeasure(std::move(atoms), {});
    }

    static DispersalMeasure delta(double y) { return from_atoms({{y, 1.0}}); }

    /// Atoms plus a density already discretized into quadrature nodes.
    DispersalMeasure(std::vector<Atom> atoms, std::vector<Atom> density_nodes)
        : atoms_(std::move(atoms)), density_(std::move(density_nodes)) {
        validate_and_normalize();
    }

    /// Composite-midpoint discretization of a density pdf on [a,b].
    template <typename Pdf>
    static DispersalMeasure with_density(std::vector<Atom> atoms, double atom_mass,
                                         Pdf&& pdf, double a, double b, int nodes) {
        if (nodes < 1) throw std::invalid_argument("measure: density needs >= 1 node");
        if (!(b > a)) throw std::invalid_argument("measure: empty density support");
        std::vector<Atom> q(static_cast<size_t>(nodes));
        const double h = (b - a) / nodes;
        double total = 0.0;
        for (int j = 0; j < nodes; ++j) {
            double y = a + (j + 0.5) * h;
            double w = h * pdf(y);
            if (w < 0.0) throw std::invalid_argument("measure: negative density value");
            q[j] = {y, w};
            total += w;
        }
        if (total <= 0.0) throw std::invalid_argument("measure: density has zero mass");
        const double density_mass = 1.0 - atom_mass;
        if (density_mass < 0.0) throw std::invalid_argument("measure: atom mass exceeds 1");
        for (auto& node : q) node.w *= density_mass / total;
        return DispersalMeasure(std::move(atoms), std::move(q));
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<Atom>& density_nodes() const { return density_; }

    /// |raw mass - 1| before the renormalization applied at construction.
    double normalization_correction() const { return normalization_correction_; }

    double mass() const {
        double m = 0.0;
        for (const auto& a : atoms_) m += a.w;
        for (const auto& a : density_) m += a.w;
        return m;
    }

    double mean_displacement() const {
        double m = 0.0;
        for (const auto& a : atoms_) m += a.w * a.y;
        for (const auto& a : density_) m += a.w * a.y;
        return m;
    }

    /// int e^{lambda |y|} dmu. Overflow propagates as +inf ("moment
    /// effectively infinite").
    double exp_moment(double lambda) const {
        if (lambda < 0.0) throw std::invalid_argument("exp_moment: lambda must be >= 0");
        double m = 0.0;
        for (const auto& a : atoms_) m += a.w * std::exp(lambda * std::abs(a.y));
        for (const auto& a : density_) m += a.w * std::exp(lambda * std::abs(a.y));
        return m;
    }

    /// int e^{-lambda y} dmu (one-sided exponential moment).
    double mgf(double lambda) const {
        double m = 0.0;
        for (const auto& a : atoms_) m += a.w * std::exp(-lambda * a.y);
        for (const auto& a : density_) m += a.w * std::exp(-lambda * a.y);
        return m;
    }

    /// Support radius max|y| of the discretized measure.
    double range() const {
        double r = 0.0;
        for (const auto& a : atoms_) r = std::max(r, std::abs(a.y));
        for (const auto& a : density_) r = std::max(r, std::abs(a.y));
        return r;
    }

    /// (mu*u)(x_i) = sum_k w_k u(x_i - y_k). Atom displacements within 1e-9
    /// cells of an integer shift use exact index arithmetic, so lattice
    /// measures agree bit-for-bit with direct index-shifted summation and
    /// translation equivariance is structural; other displacements read u by
    /// linear interpolation (convex, hence monotone- and box-preserving).
    GridProfile convolve(const GridProfile& u) const {
        GridProfile out(u.grid, 0.0, u.left_limit, u.right_limit);
        const int n = u.size();
        const double dx = u.grid.dx();
        const int last = n - 1;
        for (const auto& weight_list : {&atoms_, &density_}) {
            for (const auto& a : *weight_list) {
                const double s = a.y / dx;
                const double s_round = std::round(s);
                if (std::abs(s - s_round) <= 1e-9) {
                    const int cells = static_cast<int>(s_round);
                    for (int i = 0; i < n; ++i) {
                        int j = i - cells;
                        double uv = (j < 0) ? u.left_limit : (j > last ? u.right_limit : u.v[j]);
                        out.v[i] += a.w * uv;
                    }
                } else {
                    // read position i - s = (i - floor(s) - 1) + (1 - t); the
                    // fractional part is fixed per displacement, so every node
                    // uses identical interpolation arithmetic
                    const int cells = static_cast<int>(std::floor(s));
                    const double t = s - cells;  // in (0,1)
                    for (int i = 0; i < n; ++i) {
                        int j = i - cells - 1;
                        double uv;
                        if (j < 0)
                            uv = u.left_limit;
                        else if (j >= last)
                            uv = u.right_limit;
                        else
                            uv = t * u.v[j] + (1.0 - t) * u.v[j + 1];
                        out.v[i] += a.w * uv;
                    }
                }
            }
        }
        return out;
    }

private:
    void validate_and_normalize() {
        for (const auto& a : atoms_)
            if (a.w < 0.0) throw std::invalid_argument("measure: negative atom weight");
        for (const auto& a : density_)
            if (a.w < 0.0) throw std::invalid_argument("measure: negative quadrature weight");
        for (size_t i = 0; i < atoms_.size(); ++i)
            for (size_t j = i + 1; j < atoms_.size(); ++j)
                if (atoms_[i].y == atoms_[j].y)
                    throw std::invalid_argument("measure: duplicate atom location");
        double total = mass();
        if (!(total > 0.0) || !std::isfinite(total))
            throw std::invalid_argument("measure: total mass must be positive and finite");
        normalization_correction_ = std::abs(total - 1.0);
        if (normalization_correction_ > 0.0) {
            for (auto& a : atoms_) a.w /= total;
            for (auto& a : density_) a.w /= total;
        }
    }

    std::vector<Atom> atoms_;
    std::vector<Atom> density_;
    double normalization_correction_ = 0.0;
};

/// Built-in density families for the scenario configs.
inline DispersalMeasure uniform_density_measure(double a, double b, int nodes,
                                                std::vector<DispersalMeasure::Atom> atoms = {}) {
    double atom_mass = 0.0;
    for (const auto& at : atoms) atom_mass += at.w;
    const double inv = 1.0 / (b - a);
    return DispersalMeasure::with_density(std::move(atoms), atom_mass,
                                          [inv](double) { return inv; }, a, b, nodes);
}

inline DispersalMeasure gaussian_density_measure(double mean, double sigma, double radius_sigmas,
                                                 int nodes,
                                                 std::vector<DispersalMeasure::Atom> atoms = {}) {
    if (!(sigma > 0.0)) throw std::invalid_argument("measure: gaussian sigma must be positive");
    double atom_mass = 0.0;
    for (const auto& at : atoms) atom_mass += at.w;
    auto pdf = [mean, sigma](double y) {
        double z = (y - mean) / sigma;
        return std::exp(-0.5 * z * z);
    };
    return DispersalMeasure::with_density(std::move(atoms), atom_mass, pdf,
                                          mean - radius_sigmas * sigma,
                                          mean + radius_sigmas * sigma, nodes);
}

/// Exponential density rate*e^{-rate*y} truncated to [0, truncation].
inline DispersalMeasure exponential_density_measure(double rate, double truncation, int nodes,
                                                    std::vector<DispersalMeasure::Atom> atoms = {}) {
    if (!(rate > 0.0)) throw std::invalid_argument("measure: exponential rate must be positive");
    double atom_mass = 0.0;
    for (const auto& at : atoms) atom_mass += at.w;
    auto pdf = [rate](double y) { return rate * std::exp(-rate * y); };
    return DispersalMeasure::with_density(std::move(atoms), atom_mass, pdf, 0.0, truncation, nodes);
}

}  // namespace frontlab
