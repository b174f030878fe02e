#include "lvp/orbitfinder.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>

#include "lvp/dde.hpp"
#include "lvp/errors.hpp"

namespace lvp {

namespace {
constexpr double pi = std::numbers::pi;

struct TrigTable {
    int K, M;
    std::vector<double> c, s; // [k-1][j]

    TrigTable(int K_, int M_) : K(K_), M(M_), c(size_t(K) * M), s(size_t(K) * M) {
        for (int k = 1; k <= K; ++k)
            for (int j = 0; j < M; ++j) {
                const double t = 2.0 * pi * j * k / M;
                c[size_t(k - 1) * M + j] = std::cos(t);
                s[size_t(k - 1) * M + j] = std::sin(t);
            }
    }
    const double* cos_row(int k) const { return &c[size_t(k - 1) * M]; }
    const double* sin_row(int k) const { return &s[size_t(k - 1) * M]; }
};

void sample_into(const FourierLoop& x, const TrigTable& tt, GridPair& g) {
    const int M = tt.M;
    g.M = M;
    for (int i = 0; i < 2; ++i) {
        g.v[i].assign(size_t(M), 0.0);
        for (int k = 1; k <= x.K; ++k) {
            const double ck = x.c[i][k - 1], sk = x.s[i][k - 1];
            if (ck == 0.0 && sk == 0.0) continue;
            const double* cr = tt.cos_row(k);
            const double* sr = tt.sin_row(k);
            for (int j = 0; j < M; ++j) g.v[i][j] += ck * cr[j] + sk * sr[j];
        }
    }
}

void project_into(const GridPair& g, const TrigTable& tt, int K, double* out4K) {
    const int M = g.M;
    for (int i = 0; i < 2; ++i)
        for (int k = 1; k <= K; ++k) {
            const double* cr = tt.cos_row(k);
            const double* sr = tt.sin_row(k);
            double ck = 0.0, sk = 0.0;
            for (int j = 0; j < M; ++j) {
                ck += g.v[i][j] * cr[j];
                sk += g.v[i][j] * sr[j];
            }
            out4K[2 * K * i + (k - 1)] = 2.0 * ck / M;
            out4K[2 * K * i + K + (k - 1)] = 2.0 * sk / M;
        }
}

// layout: [c0_1..c0_K, s0_1..s0_K, c1_1..c1_K, s1_1..s1_K, lambda]
void loop_to_vec(const FourierLoop& x, double lambda, std::vector<double>& z) {
    const int K = x.K;
    z.assign(size_t(4 * K + 1), 0.0);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < K; ++k) {
            z[size_t(2 * K * i + k)] = x.c[i][k];
            z[size_t(2 * K * i + K + k)] = x.s[i][k];
        }
    z[size_t(4 * K)] = lambda;
}

FourierLoop vec_to_loop(const std::vector<double>& z, int K) {
    FourierLoop x(K);
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < K; ++k) {
            x.c[i][k] = z[size_t(2 * K * i + k)];
            x.s[i][k] = z[size_t(2 * K * i + K + k)];
        }
    return x;
}

// residual on a caller-provided grid, reusing trig tables
void residual_grid(const FourierLoop& x, double lambda, const CollocationProblem& prob,
                   const TrigTable& tt, GridPair& out) {
    const auto& sys = prob.system;
    const double be = beta(x, prob.geom, prob.beta_mode);
    const FourierLoop xd = delayed(x, sys.tau / lambda);
    const FourierLoop dx = derivative(x);
    GridPair gx, gd, gdx;
    sample_into(x, tt, gx);
    sample_into(xd, tt, gd);
    sample_into(dx, tt, gdx);
    out.M = tt.M;
    for (int i = 0; i < 2; ++i) {
        out.v[i].resize(size_t(tt.M));
        for (int j = 0; j < tt.M; ++j) {
            const double drive = sys.A(i, 0) * gd.v[0][j] + sys.A(i, 1) * gd.v[1][j];
            out.v[i][j] = gdx.v[i][j] + lambda * be * drive * (sys.b[i] + prob.theta * gx.v[i][j]);
        }
    }
}

} // namespace

GridPair residual(const FourierLoop& loop, double lambda, const CollocationProblem& prob) {
    if (!(lambda > 0.0)) fail(errc::precondition, "lambda must be positive");
    TrigTable tt(loop.K, prob.grid());
    GridPair g;
    residual_grid(loop, lambda, prob, tt, g);
    return g;
}

double sup_norm(const GridPair& g) {
    double m = 0.0;
    for (int i = 0; i < 2; ++i)
        for (double v : g.v[i]) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> equation_vector(const FourierLoop& loop, double lambda,
                                    const CollocationProblem& prob, const FourierLoop& ref) {
    const int K = prob.K;
    TrigTable tt(K, prob.grid());
    GridPair g;
    residual_grid(loop, lambda, prob, tt, g);
    std::vector<double> F(size_t(4 * K + 1), 0.0);
    project_into(g, tt, K, F.data());
    const FourierLoop dref = derivative(ref);
    F[size_t(4 * K)] = inner_l2(loop, dref) - inner_l2(ref, dref);
    return F;
}

std::vector<double> equation_jacobian(const FourierLoop& loop, double lambda,
                                      const CollocationProblem& prob, const FourierLoop& ref) {
    const int K = prob.K;
    const int M = prob.grid();
    const int N = 4 * K + 1;
    const auto& sys = prob.system;
    const double d = sys.tau / lambda;

    TrigTable tt(K, M);
    const double be = beta(loop, prob.geom, prob.beta_mode);
    const double bslope =
        prob.beta_mode == BetaVariant::radial ? beta_radial_slope(loop, prob.geom) : 0.0;

    const FourierLoop xd = delayed(loop, d);
    const FourierLoop dxd = delayed(derivative(loop), d);
    GridPair gx, gd, gdd;
    sample_into(loop, tt, gx);
    sample_into(xd, tt, gd);
    sample_into(dxd, tt, gdd);

    std::vector<double> drive(2 * size_t(M)), factor(2 * size_t(M));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < M; ++j) {
            drive[size_t(i) * M + j] = sys.A(i, 0) * gd.v[0][j] + sys.A(i, 1) * gd.v[1][j];
            factor[size_t(i) * M + j] = sys.b[i] + prob.theta * gx.v[i][j];
        }

    std::vector<double> J(size_t(N) * N, 0.0);
    const FourierLoop dref = derivative(ref);
    GridPair col;
    col.M = M;
    col.v[0].resize(size_t(M));
    col.v[1].resize(size_t(M));
    std::vector<double> proj(size_t(4 * K));

    auto put_column = [&](int col_index, double phase_row_value) {
        project_into(col, tt, K, proj.data());
        for (int rw = 0; rw < 4 * K; ++rw) J[size_t(rw) * N + col_index] = proj[size_t(rw)];
        J[size_t(4 * K) * N + col_index] = phase_row_value;
    };

    // coefficient columns: basis loop e in component p, mode m, cos/sin
    for (int p = 0; p < 2; ++p)
        for (int trig = 0; trig < 2; ++trig)
            for (int m = 1; m <= K; ++m) {
                const double* cr = tt.cos_row(m);
                const double* sr = tt.sin_row(m);
                const double cmd = std::cos(m * d), smd = std::sin(m * d);
                // e(t), e'(t), e(t - d) on the grid
                const double e_inner = pi * (1.0 + double(m) * m) *
                                       (trig == 0 ? loop.c[p][m - 1] : loop.s[p][m - 1]);
                for (int j = 0; j < M; ++j) {
                    const double e = trig == 0 ? cr[j] : sr[j];
                    const double de = trig == 0 ? -m * sr[j] : m * cr[j];
                    const double ed = trig == 0 ? cmd * cr[j] + smd * sr[j]
                                                : cmd * sr[j] - smd * cr[j];
                    for (int i = 0; i < 2; ++i) {
                        double v = lambda * be * sys.A(i, p) * ed * factor[size_t(i) * M + j];
                        if (i == p) {
                            v += de;
                            v += lambda * be * prob.theta * drive[size_t(i) * M + j] * e;
                        }
                        if (bslope != 0.0)
                            v += lambda * (2.0 * bslope * e_inner) * drive[size_t(i) * M + j] *
                                 factor[size_t(i) * M + j];
                        col.v[i][j] = v;
                    }
                }
                const double phase = pi * (trig == 0 ? dref.c[p][m - 1] : dref.s[p][m - 1]);
                put_column(2 * K * p + trig * K + (m - 1), phase);
            }

    // lambda column: d/dlambda of x(t - tau/lambda) is x'(t - tau/lambda) tau/lambda^2
    for (int j = 0; j < M; ++j)
        for (int i = 0; i < 2; ++i) {
            const double ddrive = sys.A(i, 0) * gdd.v[0][j] + sys.A(i, 1) * gdd.v[1][j];
            col.v[i][j] = be * drive[size_t(i) * M + j] * factor[size_t(i) * M + j] +
                          lambda * be * ddrive * (sys.tau / (lambda * lambda)) *
                              factor[size_t(i) * M + j];
        }
    put_column(4 * K, 0.0);
    return J;
}

OrbitSolution newton_solve(const FourierLoop& guess, double lambda_guess,
                           const CollocationProblem& prob, const NewtonOptions& opts) {
    const int K = prob.K;
    const int N = 4 * K + 1;
    FourierLoop ref = opts.phase_ref.K == K ? opts.phase_ref : guess;

    OrbitSolution sol;
    std::vector<double> z;
    loop_to_vec(guess, lambda_guess, z);

    auto norm2 = [](const std::vector<double>& v) {
        double a = 0.0;
        for (double x : v) a += x * x;
        return std::sqrt(a);
    };

    for (int it = 0; it < opts.max_iters; ++it) {
        const FourierLoop x = vec_to_loop(z, K);
        const double lambda = z[size_t(4 * K)];
        if (!(lambda > opts.lambda_min)) break;

        const GridPair rg = residual(x, lambda, prob);
        sol.residual = sup_norm(rg);
        sol.newton_iters = it;
        if (sol.residual < opts.tol) {
            sol.loop = x;
            sol.lambda = lambda;
            sol.period = 2.0 * pi * lambda;
            sol.status = SolveStatus::converged;
            break;
        }

        const std::vector<double> F = equation_vector(x, lambda, prob, ref);
        const std::vector<double> Jv = equation_jacobian(x, lambda, prob, ref);
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            J(Jv.data(), N, N);
        Eigen::Map<const Eigen::VectorXd> Fv(F.data(), N);
        Eigen::VectorXd delta = J.partialPivLu().solve(-Fv);
        if (!delta.allFinite()) break;

        // Armijo backtracking on the equation norm
        const double f0 = norm2(F);
        double step = 1.0;
        std::vector<double> z_new(z);
        bool accepted = false;
        for (int bt = 0; bt < 30; ++bt) {
            for (int q = 0; q < N; ++q) z_new[size_t(q)] = z[size_t(q)] + step * delta[q];
            if (z_new[size_t(4 * K)] > opts.lambda_min) {
                const FourierLoop xn = vec_to_loop(z_new, K);
                const double fn = norm2(equation_vector(xn, z_new[size_t(4 * K)], prob, ref));
                if (fn <= (1.0 - 1e-4 * step) * f0 || fn < opts.tol) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) break;
        z = z_new;
    }

    if (sol.status != SolveStatus::converged) {
        sol.loop = vec_to_loop(z, K);
        sol.lambda = z[size_t(4 * K)];
        sol.period = 2.0 * pi * sol.lambda;
        sol.status = SolveStatus::no_convergence;
        return sol;
    }

    if (std::sqrt(sol.loop.norm2()) < 1e-8) {
        sol.status = SolveStatus::converged_to_zero;
        return sol;
    }
    double margin = std::numeric_limits<double>::infinity();
    const int Ms = 1024;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < Ms; ++j)
            margin = std::min(margin,
                              prob.system.b[i] + sol.loop.eval(i, 2.0 * pi * j / Ms));
    sol.in_theta = margin > 0.0;
    if (!sol.in_theta) sol.status = SolveStatus::out_of_theta;
    return sol;
}

VerificationReport verify_orbit(const OrbitSolution& sol, const CollocationProblem& prob,
                                const HopfWindow& win) {
    VerificationReport rep;
    const auto& sys = prob.system;
    const FourierLoop& x = sol.loop;

    Vec2 c1{}, c2{};
    c_constants(x, sol.lambda, prob.theta, sys, prob.geom, prob.beta_mode, c1, c2);
    rep.c1_abs = std::max(std::abs(c1[0]), std::abs(c1[1]));

    // representation is zero-mean; measure the grid mean anyway
    const GridPair g = sample(x, 4 * x.K + 1);
    double means[2];
    grid_mean(g, means);
    rep.mean_abs = std::max(std::abs(means[0]), std::abs(means[1]));

    double margin = std::numeric_limits<double>::infinity();
    const int Ms = 2048;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < Ms; ++j)
            margin = std::min(margin, sys.b[i] + x.eval(i, 2.0 * pi * j / Ms));
    rep.theta_margin = margin;
    rep.in_theta = margin > 0.0;

    rep.non_stationary = std::sqrt(x.norm2()) > 1e-8;
    rep.in_window = sol.lambda > win.lambda_lo && sol.lambda < win.lambda_hi;

    // round-trip: simulate the delay system for one physical period from the
    // orbit's own history and compare
    if (rep.non_stationary && sys.tau > 0.0) {
        const double T = 2.0 * pi * sol.lambda;
        const int nh = 8192;
        std::vector<Vec2> hist(size_t(nh) + 1);
        for (int q = 0; q <= nh; ++q) {
            const double s = -sys.tau + sys.tau * q / nh; // in [-tau, 0]
            hist[size_t(q)] = {x.eval(0, s / sol.lambda), x.eval(1, s / sol.lambda)};
        }
        const auto history = HistoryFunction::sampled(sys.tau, std::move(hist));
        IntegrateOptions iop;
        iop.check_local_error = false;
        const double h = sys.tau / std::max(1024, int(std::ceil(1024.0 * sys.tau / T)));
        const Trajectory traj = integrate(sys, history, T, h, Frame::shifted_x, 1.0, iop);
        double scale = 0.0, err = 0.0;
        for (int q = 0; q <= 256; ++q) {
            const double t = T * q / 256.0;
            const Vec2 u = traj.eval(t);
            for (int i = 0; i < 2; ++i) {
                const double v = x.eval(i, t / sol.lambda);
                err = std::max(err, std::abs(u[i] - v));
                scale = std::max(scale, std::abs(v));
            }
        }
        rep.roundtrip_rel = scale > 0.0 ? err / scale : err;
    }
    return rep;
}

int isotropy_level(const FourierLoop& loop, double rel_tol) {
    const double n = std::sqrt(loop.norm2());
    if (n == 0.0) return 0;
    for (int k = 1; k <= loop.K; ++k) {
        double e = 0.0;
        for (int i = 0; i < 2; ++i)
            e += loop.c[i][k - 1] * loop.c[i][k - 1] + loop.s[i][k - 1] * loop.s[i][k - 1];
        if (std::sqrt(e) > rel_tol * n) return k;
    }
    return 0;
}

std::vector<OrbitSolution> sweep(const CollocationProblem& prob, const HopfWindow& win,
                                 const std::vector<OrbitCandidate>& candidates,
                                 const NewtonOptions& opts, int jobs, unsigned seed) {
    auto solve_candidate = [&](const OrbitCandidate& cand) -> OrbitSolution {
        const double base_amp = cand.amplitude_set
                                    ? cand.amplitude
                                    : 0.1 * std::min(prob.system.b[0], prob.system.b[1]);
        auto attempt = [&](double amp, double phase) {
            FourierLoop guess(prob.K);
            for (int i = 0; i < 2; ++i)
                guess.c[i][cand.k - 1] = prob.system.Pinv(i, cand.branch) * amp;
            if (phase != 0.0) guess = act(guess, phase);
            NewtonOptions o = opts;
            o.phase_ref = guess;
            OrbitSolution sol = newton_solve(guess, cand.lambda, prob, o);
            if (sol.status == SolveStatus::converged)
                sol.in_window = sol.lambda > win.lambda_lo && sol.lambda < win.lambda_hi;
            return sol;
        };
        for (double scale : {1.0, 0.5, 2.0, 0.25, 4.0}) {
            OrbitSolution sol = attempt(base_amp * scale, 0.0);
            if (sol.status == SolveStatus::converged) return sol;
        }
        // seeded random restarts after the deterministic ladder
        std::mt19937 rng(seed + 1315423911u * unsigned(cand.k) + unsigned(cand.n));
        std::uniform_real_distribution<double> logamp(-1.0, 1.0);
        std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
        for (int restart = 0; restart < 6; ++restart) {
            OrbitSolution sol = attempt(base_amp * std::pow(10.0, logamp(rng)), ph(rng));
            if (sol.status == SolveStatus::converged) return sol;
        }
        return {};
    };

    std::vector<OrbitSolution> per_candidate(candidates.size());
    if (jobs > 1 && candidates.size() > 1) {
        std::vector<std::future<OrbitSolution>> futs;
        futs.reserve(candidates.size());
        for (const auto& cand : candidates)
            futs.push_back(std::async(std::launch::async, solve_candidate, cand));
        for (size_t q = 0; q < futs.size(); ++q) per_candidate[q] = futs[q].get();
    } else {
        for (size_t q = 0; q < candidates.size(); ++q)
            per_candidate[q] = solve_candidate(candidates[q]);
    }

    std::vector<OrbitSolution> found;
    for (const auto& best : per_candidate) {
        if (best.status != SolveStatus::converged) continue;

        // deduplicate up to the phase action
        bool dup = false;
        for (const auto& prev : found) {
            if (std::abs(prev.lambda - best.lambda) > 1e-8) continue;
            if (isotropy_level(prev.loop) != isotropy_level(best.loop)) continue;
            if (std::abs(std::sqrt(prev.loop.norm2()) - std::sqrt(best.loop.norm2())) > 1e-6)
                continue;
            // align the dominant mode phase and compare coefficients
            const int k = std::max(1, isotropy_level(best.loop));
            int ci = std::abs(best.loop.c[0][k - 1]) + std::abs(best.loop.s[0][k - 1]) >
                             std::abs(best.loop.c[1][k - 1]) + std::abs(best.loop.s[1][k - 1])
                         ? 0
                         : 1;
            const double ph_best = std::atan2(best.loop.s[ci][k - 1], best.loop.c[ci][k - 1]);
            const double ph_prev = std::atan2(prev.loop.s[ci][k - 1], prev.loop.c[ci][k - 1]);
            const FourierLoop aligned = act(best.loop, (ph_best - ph_prev) / k);
            double diff = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int q = 0; q < prob.K; ++q)
                    diff = std::max({diff, std::abs(aligned.c[i][q] - prev.loop.c[i][q]),
                                     std::abs(aligned.s[i][q] - prev.loop.s[i][q])});
            if (diff < 1e-6) {
                dup = true;
                break;
            }
        }
        if (!dup) found.push_back(best);
    }
    return found;
}

} // namespace lvp
