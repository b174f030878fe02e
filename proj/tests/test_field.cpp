#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lvp/dde.hpp"
#include "lvp/errors.hpp"
#include "lvp/field.hpp"
#include "lvp/spectrum.hpp"

using namespace lvp;

namespace {
constexpr double pi = std::numbers::pi;
Mat2 mat(double a, double b, double c, double d) { return Mat2{{a, b, c, d}}; }
const LVSystem running = make_system(mat(2, 1, 1, 2), {3, 3}, 3.0);

ThetaGeometry running_geom() {
    return make_geometry(running, 3.0 / (2.0 * pi), 0.05, 0.01, 100.0, 0.0, 1.0);
}

FourierLoop random_loop(int K, std::mt19937& rng, double scale = 0.3) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    FourierLoop x(K);
    for (int i = 0; i < 2; ++i)
        for (int k = 1; k <= K; ++k) {
            const double w = scale * std::pow(0.6, k - 1);
            x.c[i][k - 1] = w * uni(rng);
            x.s[i][k - 1] = w * uni(rng);
        }
    return x;
}
} // namespace

TEST_CASE("a priori bounds, closed forms") {
    // running example: row sums 3, b = (1,1), 2 pi lambda_hi = tau = 3
    const AprioriBounds d = apriori_bounds(running, 3.0 / (2.0 * pi));
    CHECK(d.d3 == doctest::Approx(std::exp(9.0) - 1.0).epsilon(1e-13));
    CHECK(d.d4 == doctest::Approx(std::exp(9.0) - 1.0).epsilon(1e-13)); // symmetry
    CHECK(d.d1 > 0.0);
    CHECK(d.d1 < 1.0);
    CHECK(d.m0 > 0.0);

    // decoupled first row: a12 = 0, a11 = 1, b = (1,1), 2 pi lambda = 1
    const LVSystem dec = make_system(mat(1, 0.01, 0.01, 1), {1.01, 1.01}, 3.0);
    const AprioriBounds d2 = apriori_bounds(dec, 1.0 / (2.0 * pi));
    CHECK(d2.d3 == doctest::Approx(std::exp(1.0 * (1.0 + 0.01)) - 1.0).epsilon(1e-12));

    // overflow guard
    CHECK_THROWS_AS(apriori_bounds(running, 1e5), Error);
}

TEST_CASE("radial cutoff values") {
    const ThetaGeometry g = running_geom();
    FourierLoop x(4);
    CHECK(beta(x, g, BetaVariant::radial) == doctest::Approx(1.0)); // zero loop
    x.c[0][0] = 0.05; // norm^2 = pi * 0.0025 * 2 << 0.1
    CHECK(beta(x, g, BetaVariant::radial) == doctest::Approx(1.0));
    x.c[0][0] = 5.0; // norm^2 = pi * 25 * 2 >> 10
    CHECK(beta(x, g, BetaVariant::radial) == doctest::Approx(g.profile.alpha0));
    x.c[0][0] = 0.5; // inside the band
    const double v = beta(x, g, BetaVariant::radial);
    CHECK(v > g.profile.alpha0);
    CHECK(v < 1.0);

    // radial profile is nonincreasing along rays
    std::mt19937 rng(11);
    const FourierLoop u = random_loop(6, rng, 0.4);
    double prev = 2.0;
    for (double s = 0.0; s <= 3.0; s += 0.05) {
        FourierLoop su = u;
        su *= s;
        const double bv = beta(su, g, BetaVariant::radial);
        CHECK(bv <= prev + 1e-14);
        prev = bv;
    }
}

TEST_CASE("distance cutoff has the right plateaus") {
    const ThetaGeometry g = running_geom();
    FourierLoop x(4);
    // deep inside the excluded ball the boundary is half a radius away -> 1
    x.c[0][0] = 1e-6;
    CHECK(beta(x, g, BetaVariant::distance) == doctest::Approx(1.0));
    // exactly on the ball's sphere the distance vanishes -> alpha0
    x.c[0][0] = 0.5 * g.m1 / std::sqrt(2.0 * pi);
    CHECK(beta(x, g, BetaVariant::distance) == doctest::Approx(g.profile.alpha0).epsilon(1e-6));
    // comfortably inside the annulus: margin positive
    x.c[0][0] = 0.5;
    const double v = beta(x, g, BetaVariant::distance);
    CHECK(v > g.profile.alpha0);
    // far outside the box -> alpha0
    x.c[0][0] = 1e7;
    CHECK(beta(x, g, BetaVariant::distance) == doctest::Approx(g.profile.alpha0));
    // on the annulus boundary the admissibility margin vanishes
    CHECK(theta_boundary_margin(x, g) < 0.0);
}

TEST_CASE("N evaluations") {
    const ThetaGeometry g = running_geom();

    SUBCASE("zero loop gives zero") {
        const GridPair n = eval_N(FourierLoop(8), 0.5, 1.0, running, 65);
        for (int i = 0; i < 2; ++i)
            for (double v : n.v[i]) CHECK(v == 0.0);
    }

    SUBCASE("pure rotation case") {
        // theta = 0, x = (cos t, 0), tau/lambda = pi/2, A = I, b = (1,1):
        // N_1(t) = -cos(t - pi/2) = -sin t
        const LVSystem id_sys = make_system(mat(1, 0.01, 0.01, 1), {1.01, 1.01}, 3.0);
        FourierLoop x(4);
        x.c[0][0] = 1.0;
        const double lambda = 3.0 / (pi / 2.0);
        const GridPair n = eval_N(x, lambda, 0.0, id_sys, 64);
        for (int j = 0; j < 64; ++j) {
            const double t = 2.0 * pi * j / 64;
            // a12 couples in 0.01 * 0 = 0; first row is -cos(t - pi/2) * b1 with b1 = 1
            CHECK(n.v[0][j] == doctest::Approx(-std::sin(t)).epsilon(1e-12));
        }
    }

    SUBCASE("theta enters only through the off-equilibrium factor") {
        std::mt19937 rng(12);
        const FourierLoop x = random_loop(8, rng);
        const GridPair n0 = eval_N(x, 0.4, 0.0, running, 65);
        const GridPair n1 = eval_N(x, 0.4, 1.0, running, 65);
        const GridPair gx = sample(x, 65);
        const FourierLoop xd = delayed(x, running.tau / 0.4);
        const GridPair gd = sample(xd, 65);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 65; ++j) {
                const double drive =
                    running.A(i, 0) * gd.v[0][j] + running.A(i, 1) * gd.v[1][j];
                CHECK(n1.v[i][j] - n0.v[i][j] ==
                      doctest::Approx(-drive * gx.v[i][j]).epsilon(1e-12));
            }
    }
}

TEST_CASE("c constants vanish exactly at zero and generically do not") {
    const ThetaGeometry g = running_geom();
    Vec2 c1{}, c2{};
    c_constants(FourierLoop(8), 0.4, 1.0, running, g, BetaVariant::one, c1, c2);
    CHECK(c1[0] == 0.0);
    CHECK(c1[1] == 0.0);
    CHECK(c2[0] == 0.0);

    std::mt19937 rng(13);
    const FourierLoop x = random_loop(8, rng);
    c_constants(x, 0.4, 1.0, running, g, BetaVariant::one, c1, c2);
    CHECK(std::abs(c1[0]) + std::abs(c1[1]) > 1e-6);
}

TEST_CASE("F maps into the space and is equivariant") {
    const ThetaGeometry g = running_geom();
    std::mt19937 rng(14);

    SUBCASE("zero maps to zero") {
        const FourierLoop F0 = eval_F(FourierLoop(8), 0.4, 1.0, running, g, BetaVariant::one);
        CHECK(F0.norm2() == 0.0);
    }

    SUBCASE("zero mean and endpoint match on a dense grid") {
        const FourierLoop x = random_loop(10, rng);
        const FourierLoop F = eval_F(x, 0.4, 1.0, running, g, BetaVariant::radial);
        const GridPair gf = sample(F, 8 * 10);
        double means[2];
        grid_mean(gf, means);
        CHECK(std::abs(means[0]) < 1e-13);
        CHECK(std::abs(means[1]) < 1e-13);
        CHECK(F.eval(0, 0.0) == doctest::Approx(F.eval(0, 2.0 * pi)).epsilon(1e-12));
    }

    SUBCASE("equivariance under the phase action") {
        std::uniform_real_distribution<double> uni(0.0, 2.0 * pi);
        for (int trial = 0; trial < 25; ++trial) {
            const FourierLoop x = random_loop(10, rng);
            const double phi = uni(rng);
            const FourierLoop lhs =
                eval_F(act(x, phi), 0.4, 1.0, running, g, BetaVariant::radial);
            const FourierLoop rhs =
                act(eval_F(x, 0.4, 1.0, running, g, BetaVariant::radial), phi);
            const FourierLoop diff = lhs - rhs;
            CHECK(std::sqrt(diff.norm2()) < 1e-12 * std::max(1.0, std::sqrt(rhs.norm2())));
        }
    }
}

TEST_CASE("G coincides with F at theta = 0") {
    const ThetaGeometry g = running_geom();
    std::mt19937 rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const FourierLoop x = random_loop(8, rng);
        const FourierLoop F0 = eval_F(x, 0.4, 0.0, running, g, BetaVariant::radial);
        const FourierLoop G0 = eval_G(x, 0.4, 0.0, running, g, BetaVariant::radial);
        const FourierLoop diff = F0 - G0;
        CHECK(std::sqrt(diff.norm2()) < 1e-13 * std::max(1.0, std::sqrt(F0.norm2())));
    }
}

TEST_CASE("trajectories from boxed histories respect the a priori box") {
    // desk-scale check on shifted-frame runs: horizons stop short of the deep
    // population crash, past which the lower bound saturates to -b in doubles
    const AprioriBounds d = apriori_bounds(running, 3.0 / (2.0 * pi));
    IntegrateOptions opts;
    opts.check_local_error = false;
    for (const Vec2 start : {Vec2{0.05, -0.03}, Vec2{-0.2, 0.4}, Vec2{0.3, 0.3}}) {
        const auto hist = HistoryFunction::constant(start);
        const Trajectory traj =
            integrate(running, hist, 8.0, 3.0 / 1024.0, Frame::shifted_x, 1.0, opts);
        for (const auto& y : traj.y) {
            CHECK(y[0] > -d.d1);
            CHECK(y[0] < d.d3);
            CHECK(y[1] > -d.d2);
            CHECK(y[1] < d.d4);
        }
    }

    // a bounded orbit stays in its own window's box indefinitely
    const LVSystem gentle = make_system(mat(2, 1, 1, 2), {3, 3}, 0.6);
    const AprioriBounds dg = apriori_bounds(gentle, 0.6 / (2.0 * pi));
    const auto hist = HistoryFunction::constant({0.05, -0.03});
    const Trajectory traj = integrate(gentle, hist, 120.0, 0.6 / 512.0, Frame::shifted_x);
    for (const auto& y : traj.y) {
        CHECK(y[0] > -dg.d1);
        CHECK(y[0] < dg.d3);
        CHECK(y[1] > -dg.d2);
        CHECK(y[1] < dg.d4);
    }
}

TEST_CASE("geometry assembly sanity") {
    const ThetaGeometry g = running_geom();
    CHECK(g.bounds.d1 < g.b[0]);
    CHECK(g.bounds.d2 < g.b[1]);
    CHECK(g.bounds.d3 > 0.5 * (g.b[0] + g.bounds.d1));
    CHECK(g.bounds.d4 > 0.5 * (g.b[1] + g.bounds.d2));
    CHECK(g.m1 == doctest::Approx(0.5));
    CHECK(g.radius_r() == doctest::Approx(0.01));
    CHECK(g.radius_R() == doctest::Approx(100.0));
    CHECK_THROWS_AS(make_geometry(running, 0.5, 1.5, 0.01, 100.0, 0.0, 1.0), Error);
}
