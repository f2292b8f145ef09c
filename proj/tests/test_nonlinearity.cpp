#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "frontlab/nonlinearity.hpp"

using namespace frontlab;
using Catch::Approx;

namespace {

// sampling oracle for sup_{h>0} f(h)/h on (0, 2]
double sampled_sup_slope(const Nonlinearity& f) {
    double s = -1e300;
    for (int i = 1; i <= 200000; ++i) {
        double h = 2.0 * i / 200000.0;
        s = std::max(s, f.eval(h) / h);
    }
    // include the h -> 0+ limit
    return std::max(s, (f.eval(1e-9) - f.eval(0.0)) / 1e-9);
}

// sampling oracle for inf of difference quotients on [-1, 2]
double sampled_min_slope(const Nonlinearity& f) {
    double worst = 1e300;
    const int n = 30000;
    for (int i = 0; i < n; ++i) {
        double u = -1.0 + 3.0 * i / n;
        double h = 1e-5;
        worst = std::min(worst, (f.eval(u + h) - f.eval(u)) / h);
    }
    return worst;
}

}  // namespace

TEST_CASE("eval of the built-in kinds") {
    auto f = Nonlinearity::kpp(1.0);
    CHECK(f.eval(0.0) == 0.0);
    CHECK(f.eval(1.0) == 0.0);
    CHECK(f.eval(0.5) == Approx(0.25));

    auto p16 = Nonlinearity::prop16(0.3);
    CHECK(p16.eval(-0.5) == Approx(-0.15));
    CHECK(p16.eval(0.5) == Approx(0.3 * 0.25));
    CHECK(p16.eval(1.5) == Approx(-1.0));
    CHECK(p16.eval(3.0) == Approx(-3.0));
}

TEST_CASE("prop16 branches meet") {
    auto f = Nonlinearity::prop16(0.3);
    for (double u : {0.0, 1.0, 2.0}) {
        double below = f.eval(u - 1e-13);
        double above = f.eval(u + 1e-13);
        CHECK(std::abs(below - above) < 1e-12);
    }
}

TEST_CASE("sup slope from zero") {
    CHECK(Nonlinearity::kpp(1.0).sup_slope_from_zero() == Approx(1.0));
    CHECK(Nonlinearity::kpp(2.0).sup_slope_from_zero() == Approx(2.0));
    CHECK(Nonlinearity::prop16(0.3).sup_slope_from_zero() == Approx(0.3));

    for (auto f : {Nonlinearity::kpp(1.0), Nonlinearity::kpp(2.0), Nonlinearity::prop16(0.3)})
        CHECK(f.sup_slope_from_zero() == Approx(sampled_sup_slope(f)).margin(1e-4));
}

TEST_CASE("derivative at zero") {
    CHECK(Nonlinearity::kpp(1.0).derivative_at_zero() == 1.0);
    CHECK(Nonlinearity::kpp(0.3).derivative_at_zero() == Approx(0.3));
    // u(1-u)(1+u) = u - u^3
    auto poly = Nonlinearity::polynomial({1.0, 0.0, -1.0});
    CHECK(poly.derivative_at_zero() == Approx(1.0).margin(1e-9));
}

TEST_CASE("comparison constant") {
    CHECK(Nonlinearity::kpp(1.0).comparison_constant() == Approx(4.0));
    CHECK(Nonlinearity::kpp(0.5).comparison_constant() == Approx(2.5));
    CHECK(Nonlinearity::polynomial({0.0}).comparison_constant() == Approx(1.0));

    for (auto f : {Nonlinearity::kpp(1.0), Nonlinearity::kpp(0.5), Nonlinearity::prop16(0.3)})
        CHECK(f.comparison_constant() == Approx(1.0 - sampled_min_slope(f)).margin(1e-3));
}

TEST_CASE("slope consistency") {
    for (auto f : {Nonlinearity::kpp(1.0), Nonlinearity::kpp(2.0), Nonlinearity::prop16(0.4),
                   Nonlinearity::polynomial({1.0, 0.0, -1.0})})
        CHECK(f.sup_slope_from_zero() >= f.derivative_at_zero() - 1e-9);
}

TEST_CASE("positivity validation") {
    // f(1) != 0
    CHECK_THROWS_AS(Nonlinearity::polynomial({1.0}), std::invalid_argument);
    // negative on (0,1): f = -u(1-u) = -u + u^2
    CHECK_THROWS_AS(Nonlinearity::polynomial({-1.0, 1.0}), std::invalid_argument);

    // the zero polynomial is admitted as the zero-reaction limit
    auto zero = Nonlinearity::polynomial({0.0, 0.0});
    CHECK_FALSE(zero.positive_on_unit_interval());
    CHECK(zero.eval(0.3) == 0.0);

    CHECK(Nonlinearity::kpp(1.0).positive_on_unit_interval());
    CHECK(Nonlinearity::polynomial({1.0, 0.0, -1.0}).positive_on_unit_interval());
}

TEST_CASE("linear determinacy gate") {
    CHECK(Nonlinearity::kpp(1.0).linearly_determinate_by_sampling());
    CHECK(Nonlinearity::kpp(0.3).linearly_determinate_by_sampling());
    // u(1-u)(1+u) = u - u^3 <= u on (0,1]
    CHECK(Nonlinearity::polynomial({1.0, 0.0, -1.0}).linearly_determinate_by_sampling());
    // u(1-u)(1+2u): f'(0) = 1 but f(0.25) = 0.28 > 0.25
    auto bumped = Nonlinearity::polynomial({1.0, 1.0, -2.0});
    CHECK(bumped.positive_on_unit_interval());
    CHECK_FALSE(bumped.linearly_determinate_by_sampling());
}
