#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lvp/errors.hpp"
#include "lvp/orbitfinder.hpp"

using namespace lvp;

namespace {
constexpr double pi = std::numbers::pi;
Mat2 mat(double a, double b, double c, double d) { return Mat2{{a, b, c, d}}; }
const LVSystem running = make_system(mat(2, 1, 1, 2), {3, 3}, 3.0);

CollocationProblem running_problem(int K = 32) {
    CollocationProblem prob;
    prob.system = running;
    prob.K = K;
    prob.theta = 1.0;
    prob.beta_mode = BetaVariant::one;
    prob.geom = make_geometry(running, 3.0 / (2.0 * pi), 0.05, 0.01, 100.0, 0.0, 1.0);
    return prob;
}

FourierLoop random_loop(int K, std::mt19937& rng, double scale = 0.2) {
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

FourierLoop catalog_seed(const CollocationProblem& prob, const OrbitCandidate& cand,
                         double amp) {
    FourierLoop seed(prob.K);
    for (int i = 0; i < 2; ++i) seed.c[i][cand.k - 1] = prob.system.Pinv(i, cand.branch) * amp;
    return seed;
}
} // namespace

TEST_CASE("the origin is always a stationary solution") {
    const auto prob = running_problem(16);
    const GridPair r = residual(FourierLoop(16), 0.4, prob);
    CHECK(sup_norm(r) == 0.0);
}

TEST_CASE("the catalog seed is close but not converged") {
    const auto prob = running_problem(32);
    const HopfWindow win = make_window(running);
    auto cats = catalog(running, win);
    CutoffProfile prof{0.05, std::sqrt(0.01), std::sqrt(100.0)};
    solve_amplitudes(cats, prof);
    const FourierLoop seed = catalog_seed(prob, cats[0], cats[0].amplitude);
    const double r = sup_norm(residual(seed, cats[0].lambda, prob));
    CHECK(r > 1e-3);
    CHECK(r < 10.0);
}

TEST_CASE("residual is equivariant under the phase action") {
    const auto prob = running_problem(16);
    const int M = prob.grid();
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * pi);
    std::uniform_int_distribution<int> shift(1, M - 1);
    for (int trial = 0; trial < 20; ++trial) {
        const FourierLoop x = random_loop(16, rng);

        // grid-aligned phases permute the residual samples, so the sup is equal
        const double phi_grid = 2.0 * pi * shift(rng) / M;
        const double a = sup_norm(residual(x, 0.4, prob));
        const double b = sup_norm(residual(act(x, phi_grid), 0.4, prob));
        CHECK(a == doctest::Approx(b).epsilon(1e-12));

        // arbitrary phases rotate the projected residual isometrically
        const double phi = uni(rng);
        const FourierLoop rx = project(residual(x, 0.4, prob), 2 * prob.K);
        const FourierLoop rphi = project(residual(act(x, phi), 0.4, prob), 2 * prob.K);
        CHECK(std::sqrt(rphi.norm2()) ==
              doctest::Approx(std::sqrt(rx.norm2())).epsilon(1e-12));
        const FourierLoop diff = rphi - act(rx, phi);
        CHECK(std::sqrt(diff.norm2()) < 1e-12 * std::max(1.0, std::sqrt(rx.norm2())));
    }
}

TEST_CASE("analytic Jacobian matches central differences") {
    std::mt19937 rng(22);
    for (BetaVariant variant : {BetaVariant::one, BetaVariant::radial}) {
        auto prob = running_problem(6);
        prob.beta_mode = variant;
        const FourierLoop x = random_loop(6, rng, 0.4);
        const FourierLoop ref = random_loop(6, rng, 0.3);
        const double lambda = 0.4;
        const int N = 4 * prob.K + 1;

        const auto J = equation_jacobian(x, lambda, prob, ref);

        const double step = 1e-6;
        double worst = 0.0;
        for (int col = 0; col < N; ++col) {
            FourierLoop xp = x, xm = x;
            double lp = lambda, lm = lambda;
            if (col < 4 * prob.K) {
                const int i = col / (2 * prob.K);
                const int rem = col % (2 * prob.K);
                const bool is_sin = rem >= prob.K;
                const int k = rem % prob.K;
                if (!is_sin) {
                    xp.c[i][k] += step;
                    xm.c[i][k] -= step;
                } else {
                    xp.s[i][k] += step;
                    xm.s[i][k] -= step;
                }
            } else {
                lp += step;
                lm -= step;
            }
            const auto Fp = equation_vector(xp, lp, prob, ref);
            const auto Fm = equation_vector(xm, lm, prob, ref);
            for (int row = 0; row < N; ++row) {
                const double fd = (Fp[size_t(row)] - Fm[size_t(row)]) / (2.0 * step);
                const double an = J[size_t(row) * N + col];
                worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
            }
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("newton converges on the running example from the catalog seed") {
    auto prob = running_problem(32);
    const HopfWindow win = make_window(running);
    auto cats = catalog(running, win);
    REQUIRE(cats.size() == 1);
    CutoffProfile prof{0.05, std::sqrt(0.01), std::sqrt(100.0)};
    solve_amplitudes(cats, prof);

    // the window orbit sits at roughly twice the modified-system amplitude;
    // walking the same scaling ladder as sweep reaches its basin
    OrbitSolution sol;
    for (double scale : {1.0, 0.5, 2.0, 0.25, 4.0}) {
        const FourierLoop seed = catalog_seed(prob, cats[0], cats[0].amplitude * scale);
        NewtonOptions opts;
        opts.phase_ref = seed;
        sol = newton_solve(seed, cats[0].lambda, prob, opts);
        if (sol.status == SolveStatus::converged) break;
    }

    REQUIRE(sol.status == SolveStatus::converged);
    CHECK(sol.residual < 1e-10);
    CHECK(sol.lambda > win.lambda_lo);
    CHECK(sol.lambda < win.lambda_hi);
    CHECK(sol.period > 1.5);
    CHECK(sol.period < 3.0);
    CHECK(sol.in_theta);

    SUBCASE("verification report passes") {
        const VerificationReport rep = verify_orbit(sol, prob, win);
        CHECK(rep.non_stationary);
        CHECK(rep.in_theta);
        CHECK(rep.in_window);
        CHECK(rep.mean_abs < 1e-8);
        CHECK(rep.c1_abs < 1e-8);
        CHECK(rep.theta_margin > 0.0);
        CHECK(rep.roundtrip_rel < 1e-6);
        CHECK(rep.pass());
    }

    SUBCASE("rotated solutions converge right back") {
        for (double phi : {0.4, 1.9, 4.4}) {
            NewtonOptions o2;
            o2.phase_ref = act(sol.loop, phi);
            const OrbitSolution again = newton_solve(act(sol.loop, phi), sol.lambda, prob, o2);
            REQUIRE(again.status == SolveStatus::converged);
            CHECK(again.newton_iters <= 2);
            CHECK(again.lambda == doctest::Approx(sol.lambda).epsilon(1e-10));
            CHECK(again.residual < 1e-10);
        }
    }

    SUBCASE("truncation robustness: K = 32 vs K = 64") {
        auto prob64 = running_problem(64);
        FourierLoop seed64(64);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 32; ++k) {
                seed64.c[i][k] = sol.loop.c[i][k];
                seed64.s[i][k] = sol.loop.s[i][k];
            }
        NewtonOptions o64;
        o64.phase_ref = seed64;
        const OrbitSolution sol64 = newton_solve(seed64, sol.lambda, prob64, o64);
        REQUIRE(sol64.status == SolveStatus::converged);
        CHECK(std::abs(sol64.lambda - sol.lambda) < 1e-9);
        double coeff_diff = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 32; ++k)
                coeff_diff = std::max({coeff_diff, std::abs(sol64.loop.c[i][k] - sol.loop.c[i][k]),
                                       std::abs(sol64.loop.s[i][k] - sol.loop.s[i][k])});
        CHECK(coeff_diff < 1e-8);
    }
}

TEST_CASE("zero delay admits no nontrivial orbits") {
    LVSystem sys0 = running;
    sys0.tau = 0.0;
    CollocationProblem prob;
    prob.system = sys0;
    prob.K = 12;
    prob.geom = make_geometry(running, 3.0 / (2.0 * pi), 0.05, 0.01, 100.0, 0.0, 1.0);

    std::mt19937 rng(23);
    std::uniform_real_distribution<double> lam(0.2, 0.5);
    int nontrivial = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const FourierLoop seed = random_loop(12, rng, 0.3);
        const OrbitSolution sol = newton_solve(seed, lam(rng), prob);
        if (sol.status == SolveStatus::converged && std::sqrt(sol.loop.norm2()) > 1e-6)
            ++nontrivial;
    }
    CHECK(nontrivial == 0);

    // the quadratic-form identity behind the exclusion: a periodic solution
    // would force a11 int x1^2 + (a12+a21) int x1 x2 + a22 int x2^2 = 0, which
    // the positive definite interaction forbids for nonzero loops
    for (int trial = 0; trial < 50; ++trial) {
        const FourierLoop x = random_loop(8, rng, 0.5);
        if (std::sqrt(x.norm2()) <= 1e-6) continue;
        double q11 = 0.0, q12 = 0.0, q22 = 0.0;
        const int M = 256;
        for (int j = 0; j < M; ++j) {
            const double t = 2.0 * pi * j / M;
            const double x1 = x.eval(0, t), x2 = x.eval(1, t);
            q11 += x1 * x1;
            q12 += x1 * x2;
            q22 += x2 * x2;
        }
        const double form = 2.0 * q11 + (1.0 + 1.0) * q12 + 2.0 * q22; // A = [[2,1],[1,2]]
        CHECK(form > 0.0);
    }
}

TEST_CASE("small constant cutoff admits only the zero solution") {
    // beta pinned at alpha0 by a transition band far below reachable norms
    auto prob = running_problem(12);
    prob.beta_mode = BetaVariant::radial;
    prob.geom = make_geometry(running, 3.0 / (2.0 * pi), 0.05, 1e-12, 4e-12, 0.0, 1.0);

    std::mt19937 rng(24);
    std::uniform_real_distribution<double> lam(0.25, 0.47);
    int nontrivial = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const FourierLoop seed = random_loop(12, rng, 0.3);
        const OrbitSolution sol = newton_solve(seed, lam(rng), prob);
        if (sol.status == SolveStatus::converged && std::sqrt(sol.loop.norm2()) > 1e-6)
            ++nontrivial;
    }
    CHECK(nontrivial == 0);
}

TEST_CASE("verification flags on degenerate inputs") {
    const auto prob = running_problem(16);
    const HopfWindow win = make_window(running);

    // the zero loop: stationary, everything else trivially fine
    OrbitSolution zero;
    zero.loop = FourierLoop(16);
    zero.lambda = 0.4;
    const VerificationReport rz = verify_orbit(zero, prob, win);
    CHECK_FALSE(rz.non_stationary);
    CHECK(rz.in_theta);
    CHECK(rz.c1_abs == 0.0);
    CHECK_FALSE(rz.pass());

    // a loop leaving the positivity region is flagged
    OrbitSolution big;
    big.loop = FourierLoop(16);
    big.loop.c[0][0] = 5.0; // b_1 + x_1 dips to -4
    big.lambda = 0.4;
    const VerificationReport rb = verify_orbit(big, prob, win);
    CHECK_FALSE(rb.in_theta);
    CHECK(rb.theta_margin < 0.0);
}

TEST_CASE("an asymmetric system verifies end to end") {
    // mu = (5, 2), windings (1, 0) at tau = 2
    const LVSystem sys = make_system(mat(3, 1, 2, 4), {4, 6}, 2.0);
    const HopfWindow win = make_window(sys);
    CHECK(win.k0 == 1);
    auto cats = catalog(sys, win);
    REQUIRE(cats.size() == 1);
    CutoffProfile prof{0.05, std::sqrt(0.01), std::sqrt(100.0)};
    solve_amplitudes(cats, prof);

    CollocationProblem prob;
    prob.K = 32;
    prob.system = sys;
    prob.geom = make_geometry(sys, win.lambda_hi, 0.05, 0.01, 100.0, 0.0, 1.0);
    const auto sols = sweep(prob, win, cats);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].lambda > win.lambda_lo);
    CHECK(sols[0].lambda < win.lambda_hi);
    const VerificationReport rep = verify_orbit(sols[0], prob, win);
    CHECK(rep.pass());
}

TEST_CASE("sweep finds one orbit and deduplicates rotations") {
    auto prob = running_problem(32);
    const HopfWindow win = make_window(running);
    auto cats = catalog(running, win);
    CutoffProfile prof{0.05, std::sqrt(0.01), std::sqrt(100.0)};
    solve_amplitudes(cats, prof);

    const auto sols = sweep(prob, win, cats);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].in_window);
    CHECK(isotropy_level(sols[0].loop) == 1);

    // feeding the same candidate many times over does not create duplicates
    std::vector<OrbitCandidate> repeated;
    for (int q = 0; q < 17; ++q) repeated.push_back(cats[0]);
    const auto sols2 = sweep(prob, win, repeated);
    CHECK(sols2.size() == 1);

    const auto none = sweep(prob, win, {});
    CHECK(none.empty());
}
