#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "frontlab/semiflow.hpp"
#include "test_helpers.hpp"

using namespace frontlab;
using frontlab::testing::random_monotone_profile;
using frontlab::testing::random_ordered_pair;
using frontlab::testing::two_atom_measure;
using Catch::Approx;

namespace {

GridProfile constant_profile(const Grid& g, double a) { return GridProfile(g, a, a, a); }

double logistic_exact(double u0, double gamma, double t) {
    return u0 * std::exp(gamma * t) / (1.0 - u0 + u0 * std::exp(gamma * t));
}

// scalar RK4 replica for du/dt = u(1-u)
double scalar_rk4_logistic(double u, double dt) {
    auto f = [](double x) { return x * (1.0 - x); };
    double k1 = f(u);
    double k2 = f(u + 0.5 * dt * k1);
    double k3 = f(u + 0.5 * dt * k2);
    double k4 = f(u + dt * k3);
    return u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

TEST_CASE("rhs at equilibria and constants") {
    Grid g(-20.0, 20.0, 401);
    auto m = two_atom_measure();
    auto f = Nonlinearity::kpp(1.0);

    GridProfile zero = constant_profile(g, 0.0);
    GridProfile one = constant_profile(g, 1.0);
    GridProfile half = constant_profile(g, 0.5);

    for (double v : rhs(m, f, zero).v) CHECK(v == 0.0);
    for (double v : rhs(m, f, one).v) CHECK(v == Approx(0.0).margin(1e-15));
    for (double v : rhs(m, f, half).v) CHECK(v == Approx(0.25).margin(1e-14));
    CHECK(rhs(m, f, half).left_limit == Approx(0.25));
}

TEST_CASE("step matches the scalar oracle when transport is trivial") {
    Grid g(-20.0, 20.0, 401);
    auto m = DispersalMeasure::delta(0.0);
    auto f = Nonlinearity::kpp(1.0);
    SemiflowConfig cfg;

    GridProfile zero = constant_profile(g, 0.0);
    GridProfile stepped0 = step(m, f, zero, 0.1, cfg);
    for (double v : stepped0.v) CHECK(v == 0.0);

    GridProfile half = constant_profile(g, 0.5);
    GridProfile stepped = step(m, f, half, 0.1, cfg);
    double oracle = scalar_rk4_logistic(0.5, 0.1);
    CHECK(oracle == Approx(0.5249791861755524).margin(1e-12));
    for (double v : stepped.v) CHECK(v == Approx(oracle).margin(1e-15));
}

TEST_CASE("pure transport decays toward the shifted profile") {
    // f == 0, m = delta_1: du_i/dt = u_{i-L} - u_i has the closed form
    // u_i(t) = e^{-t} sum_j t^j/j! u0(i - jL)  (Poisson smoothing)
    Grid g(-20.0, 20.0, 401);  // dx = 0.1, L = 10
    auto m = DispersalMeasure::delta(1.0);
    auto f = Nonlinearity::polynomial({0.0});
    SemiflowConfig cfg;
    cfg.dt = 0.01;

    GridProfile h = heaviside_profile(g);
    double T = 0.5;
    GridProfile out = evolve(m, f, h, T, cfg);

    const int L = 10;
    for (int i = 40; i < g.n - 40; i += 13) {
        double expect = 0.0, pj = std::exp(-T);
        for (int j = 0; j < 40; ++j) {
            int src = i - j * L;
            double u0 = src < 0 ? 0.0 : (src >= g.n ? 1.0 : h.v[src]);
            expect += pj * u0;
            pj *= T / (j + 1);
        }
        REQUIRE(out.v[i] == Approx(expect).margin(1e-8));
    }
    for (double v : out.v) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
    }
    REQUIRE(is_monotone(out));
}

TEST_CASE("evolve reproduces the logistic closed form") {
    Grid g(-5.0, 5.0, 64);
    auto m = DispersalMeasure::delta(0.0);
    auto f = Nonlinearity::kpp(1.0);
    SemiflowConfig cfg;
    cfg.dt = 0.05;

    GridProfile u0 = constant_profile(g, 0.5);
    CHECK(sup_norm_diff(evolve(m, f, u0, 0.0, cfg), u0) == 0.0);

    GridProfile u1 = evolve(m, f, u0, 1.0, cfg);
    double expect = 1.0 / (1.0 + std::exp(-1.0));
    CHECK(expect == Approx(0.7310585786300049).margin(1e-16));
    for (double v : u1.v) REQUIRE(v == Approx(expect).margin(1e-6));
}

TEST_CASE("translate") {
    Grid g(-20.0, 20.0, 401);
    GridProfile h = heaviside_profile(g);
    CHECK(sup_norm_diff(translate(h, 0), h) == 0.0);

    GridProfile t3 = translate(h, 3);
    for (int i = 0; i < g.n; ++i) {
        double x = g.x(i) - 3 * g.dx();
        double expect = x < 0.0 ? 0.0 : (x > 0.0 ? 1.0 : 0.5);
        REQUIRE(t3.v[i] == Approx(expect).margin(1e-12));
    }

    std::mt19937_64 rng(3);
    GridProfile u = random_monotone_profile(rng, g);
    GridProfile back = translate(translate(u, 9), -9);
    for (int i = 20; i < g.n - 20; ++i) REQUIRE(back.v[i] == u.v[i]);
}

TEST_CASE("fractional translate") {
    Grid g(-20.0, 20.0, 401);
    std::mt19937_64 rng(5);
    GridProfile u = random_monotone_profile(rng, g);

    // integer-cell displacements snap to the exact path
    GridProfile a = fractional_translate(u, 4 * g.dx());
    GridProfile b = translate(u, 4);
    CHECK(sup_norm_diff(a, b) == 0.0);

    // half-cell shift of a linear ramp is exact
    GridProfile ramp(g, 0.0, 0.0, 1.0);
    for (int i = 0; i < g.n; ++i)
        ramp.v[i] = std::clamp((g.x(i) + 1.0) / 2.0, 0.0, 1.0);
    GridProfile shifted = fractional_translate(ramp, 0.5 * g.dx());
    for (int i = 150; i < 250; ++i)
        REQUIRE(shifted.v[i] == Approx(std::clamp((g.x(i) - 0.5 * g.dx() + 1.0) / 2.0, 0.0, 1.0))
                                    .margin(1e-14));

    GridProfile c = fractional_translate(u, 0.37);
    REQUIRE(is_monotone(c, 1e-15));
}

TEST_CASE("comparison principle on random ordered pairs") {
    Grid g(-20.0, 20.0, 401);
    auto m = two_atom_measure();
    auto f = Nonlinearity::kpp(1.0);
    SemiflowConfig cfg;
    cfg.dt = 0.1;
    const int guard = resolve_guard(cfg, m, g);

    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 25; ++trial) {
        auto [lo, hi] = random_ordered_pair(rng, g);
        GridProfile lo_T = evolve(m, f, lo, 2.0, cfg);
        GridProfile hi_T = evolve(m, f, hi, 2.0, cfg);
        for (int i = guard; i < g.n - guard; ++i)
            REQUIRE(lo_T.v[i] <= hi_T.v[i] + 1e-8);
    }
}

TEST_CASE("class-M data stays in the box with negligible clamping") {
    Grid g(-20.0, 20.0, 401);
    auto m = two_atom_measure();
    auto f = Nonlinearity::kpp(1.0);
    SemiflowConfig cfg;
    cfg.dt = 0.1;

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        GridProfile u = random_monotone_profile(rng, g);
        EvolveStats stats;
        GridProfile uT = evolve(m, f, u, 3.0, cfg, &stats);
        REQUIRE(is_monotone(uT));
        for (double v : uT.v) {
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
        }
        REQUIRE(stats.max_clamp_correction < 1e-9);
        REQUIRE(stats.max_monotonicity_violation < 1e-9);
    }
}

TEST_CASE("evolve commutes with integer translation away from the boundary") {
    Grid g(-20.0, 20.0, 401);
    auto m = two_atom_measure();
    auto f = Nonlinearity::kpp(1.0);
    SemiflowConfig cfg;
    cfg.dt = 0.1;
    const int k = 5;
    const int guard = resolve_guard(cfg, m, g);
    // contamination spreads by range(mu) per unit time
    const int pad = k + guard + static_cast<int>(std::ceil(2.0 * m.range() / g.dx()));

    std::mt19937_64 rng(8);
    GridProfile u = random_monotone_profile(rng, g);
    GridProfile a = evolve(m, f, translate(u, k), 2.0, cfg);
    GridProfile b = translate(evolve(m, f, u, 2.0, cfg), k);
    for (int i = pad; i < g.n - pad; ++i) REQUIRE(a.v[i] == Approx(b.v[i]).margin(1e-12));
}

TEST_CASE("constants in (0,1) strictly increase and track the logistic") {
    Grid g(-5.0, 5.0, 64);
    auto m = two_atom_measure();
    auto f = Nonlinearity::kpp(1.0);
    SemiflowConfig cfg;
    cfg.dt = 0.05;

    for (double alpha : {0.1, 0.5, 0.9}) {
        GridProfile u = constant_profile(g, alpha);
        GridProfile uT = evolve(m, f, u, 1.0, cfg);
        double expect = logistic_exact(alpha, 1.0, 1.0);
        for (double v : uT.v) {
            REQUIRE(v > alpha);
            REQUIRE(v == Approx(expect).margin(1e-6));
        }
    }
}

TEST_CASE("semigroup property at step multiples") {
    Grid g(-20.0, 20.0, 401);
    auto m = two_atom_measure();
    auto f = Nonlinearity::kpp(1.0);
    SemiflowConfig cfg;
    cfg.dt = 0.1;

    std::mt19937_64 rng(17);
    GridProfile u = random_monotone_profile(rng, g);
    GridProfile ab = evolve(m, f, evolve(m, f, u, 0.8, cfg), 0.4, cfg);
    GridProfile once = evolve(m, f, u, 1.2, cfg);
    CHECK(sup_norm_diff(ab, once) <= 1e-10);
}

TEST_CASE("stability guard") {
    Grid g(-5.0, 5.0, 64);
    auto m = two_atom_measure();
    auto f = Nonlinearity::kpp(1.0);  // K = 4, so dt <= 0.1
    SemiflowConfig cfg;
    cfg.dt = 0.2;
    GridProfile u = constant_profile(g, 0.5);
    CHECK_THROWS_AS(evolve(m, f, u, 1.0, cfg), std::runtime_error);
    CHECK_FALSE(stability_guard_ok(0.2, f));

    cfg.enforce_stability_guard = false;
    CHECK_NOTHROW(step(m, f, u, 0.2, cfg));
}
