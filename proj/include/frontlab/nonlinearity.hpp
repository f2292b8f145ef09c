#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace frontlab {

/// Monostable reaction term f with f(0) = f(1) = 0 and f > 0 on (0,1),
/// plus the slope functionals the speed bounds need. Slope extrema are taken
/// over the working range [-1, 2]: the flow preserves [0,1], and the
/// extended kinds only differ near that band.
///
/// Built-in kinds:
///   kpp(gamma)        f(u) = gamma * u * (1 - u), the formula used on all of R
///   prop16(gamma)     gamma*u on (-inf,0), gamma*u*(1-u) on [0,1],
///                     -2(u-1) on (1,2), -u on [2,inf)
///   polynomial(c)     f(u) = sum_k c[k] u^{k+1} (constant term forced 0)
///
/// A polynomial must pass f(1) = 0 and a 10^4-point positivity check on
/// (0,1); the all-zero polynomial is admitted as the zero-reaction limit and
/// reports positive_on_unit_interval() == false so callers can gate
/// monostability-dependent work.
class Nonlinearity {
public:
    enum class Kind { kpp_gamma, prop16_extension, custom_polynomial };

    static Nonlinearity kpp(double gamma) {
        if (!(gamma > 0.0)) throw std::invalid_argument("nonlinearity: kpp gamma must be positive");
        return Nonlinearity(Kind::kpp_gamma, gamma, {});
    }

    static Nonlinearity prop16(double gamma) {
        if (!(gamma > 0.0))
            throw std::invalid_argument("nonlinearity: prop16 gamma must be positive");
        return Nonlinearity(Kind::prop16_extension, gamma, {});
    }

    static Nonlinearity polynomial(std::vector<double> coeffs) {
        return Nonlinearity(Kind::custom_polynomial, 0.0, std::move(coeffs));
    }

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }

    double eval(double u) const {
        switch (kind_) {
            case Kind::kpp_gamma:
                return gamma_ * u * (1.0 - u);
            case Kind::prop16_extension:
                if (u < 0.0) return gamma_ * u;
                if (u <= 1.0) return gamma_ * u * (1.0 - u);
                if (u < 2.0) return -2.0 * (u - 1.0);
                return -u;
            case Kind::custom_polynomial: {
                double acc = 0.0;
                for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = (acc + *it) * u;
                return acc;
            }
        }
        return 0.0;
    }

    /// f'(0): analytic for the built-in kinds, central finite difference
    /// (h = 1e-6, cross-checked at 1e-7) for polynomials.
    double derivative_at_zero() const {
        if (kind_ != Kind::custom_polynomial) return gamma_;
        auto central = [this](double h) { return (eval(h) - eval(-h)) / (2.0 * h); };
        double d6 = central(1e-6);
        double d7 = central(1e-7);
        double scale = std::max({std::abs(d6), std::abs(d7), 1e-8});
        if (std::abs(d6 - d7) > 1e-4 * scale)
            throw std::runtime_error("nonlinearity: finite-difference derivative cross-check failed");
        return d6;
    }

    /// sup_{h>0} f(h)/h. Analytic for the built-in kinds; dense sampling on
    /// (0,2] plus the h->0+ limit for polynomials.
    double sup_slope_from_zero() const {
        switch (kind_) {
            case Kind::kpp_gamma:
            case Kind::prop16_extension:
                // gamma*(1-h) on the first branch, negative beyond it.
                return gamma_;
            case Kind::custom_polynomial: {
                double s = derivative_at_zero();
                const int samples = 20000;
                for (int i = 1; i <= samples; ++i) {
                    double h = 2.0 * i / samples;
                    s = std::max(s, eval(h) / h);
                }
                return s;
            }
        }
        return 0.0;
    }

    /// inf of difference quotients (f(u+h)-f(u))/h over the working range.
    double min_slope_on_range() const {
        switch (kind_) {
            case Kind::kpp_gamma:
                // f'(u) = gamma(1-2u), minimized at u = 2.
                return -3.0 * gamma_;
            case Kind::prop16_extension:
                // branch slopes: gamma, gamma(1-2u) >= -gamma on [0,1], -2, -1
                return std::min(-gamma_, -2.0);
            case Kind::custom_polynomial:
                return sampled_derivative_extremum(false);
        }
        return 0.0;
    }

    /// sup of difference quotients over the working range (the Lipschitz
    /// upper slope used by the continuous-dependence envelope).
    double max_slope_on_range() const {
        switch (kind_) {
            case Kind::kpp_gamma:
                return 3.0 * gamma_;  // f'(-1)
            case Kind::prop16_extension:
                return gamma_;
            case Kind::custom_polynomial:
                return sampled_derivative_extremum(true);
        }
        return 0.0;
    }

    /// K = 1 - inf (f(u+h)-f(u))/h, the constant the comparison argument and
    /// the time-step stability guard are built on.
    double comparison_constant() const { return 1.0 - min_slope_on_range(); }

    /// True when f passed the strict positivity sampling on (0,1).
    bool positive_on_unit_interval() const { return positive_on_unit_; }

    /// True when f(u) <= f'(0) u holds on a sampling grid of (0,1] (the
    /// linear-determinacy gate).
    bool linearly_determinate_by_sampling() const {
        double d0 = derivative_at_zero();
        const int samples = 10000;
        for (int i = 1; i <= samples; ++i) {
            double u = static_cast<double>(i) / samples;
            if (eval(u) > d0 * u + 1e-12) return false;
        }
        return true;
    }

private:
    Nonlinearity(Kind kind, double gamma, std::vector<double> coeffs)
        : kind_(kind), gamma_(gamma), coeffs_(std::move(coeffs)) {
        if (kind_ == Kind::custom_polynomial) {
            double at_one = eval(1.0);
            if (std::abs(at_one) > 1e-12)
                throw std::invalid_argument("nonlinearity: polynomial must satisfy f(1) = 0");
            bool all_zero = true;
            for (double c : coeffs_)
                if (c != 0.0) all_zero = false;
            if (all_zero) {
                positive_on_unit_ = false;
                return;
            }
        }
        positive_on_unit_ = check_positivity();
        if (!positive_on_unit_)
            throw std::invalid_argument("nonlinearity: f must be positive on (0,1)");
    }

    bool check_positivity() const {
        const int samples = 10001;
        for (int i = 1; i < samples; ++i) {
            double u = static_cast<double>(i) / samples;
            if (!(eval(u) > 0.0)) return false;
        }
        return true;
    }

    double sampled_derivative_extremum(bool want_max) const {
        // derivative polynomial evaluated densely on [-1, 2]
        const int samples = 100000;
        double best = want_max ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
        for (int i = 0; i <= samples; ++i) {
            double u = -1.0 + 3.0 * i / samples;
            double d = 0.0;
            for (size_t k = coeffs_.size(); k-- > 0;)
                d = d * u + coeffs_[k] * static_cast<double>(k + 1);
            best = want_max ? std::max(best, d) : std::min(best, d);
        }
        return best;
    }

    Kind kind_;
    double gamma_;
    std::vector<double> coeffs_;
    bool positive_on_unit_ = true;
};

}  // namespace frontlab
