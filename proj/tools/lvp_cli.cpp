// Command-line front end: hypothesis checks, spectral catalog, direct
// simulation, orbit finding and the degree certificate, with CSV and
// key-value reports.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "lvp/config.hpp"
#include "lvp/csv.hpp"
#include "lvp/degree.hpp"
#include "lvp/dde.hpp"
#include "lvp/errors.hpp"
#include "lvp/orbitfinder.hpp"

namespace fs = std::filesystem;
using namespace lvp;

namespace {

constexpr double pi = std::numbers::pi;

constexpr int exit_ok = 0;
constexpr int exit_hypotheses = 1;
constexpr int exit_no_window = 2;
constexpr int exit_integration = 3;
constexpr int exit_no_orbit = 4;
constexpr int exit_degree = 5;
constexpr int exit_usage = 64;

struct Cli {
    std::string config_path;
    std::string out_dir;
    long seed = 0;
    int jobs = 1;
    bool force = false;
    bool logistic = false;
    int k_filter = 0;
    int j_override = 0;
    double alpha = 0.0;
    double tau_flag = -1.0;
    double perturb = 0.05;
};

int write_text(const Cli& cli, const std::string& name, const std::string& content) {
    fs::create_directories(cli.out_dir);
    const fs::path path = fs::path(cli.out_dir) / name;
    if (fs::exists(path) && !cli.force) {
        std::cerr << "refusing to overwrite " << path << " (pass --force)\n";
        return exit_usage;
    }
    std::ofstream out(path);
    out << content;
    return exit_ok;
}

std::string hypothesis_text(const HypothesisReport& rep) {
    std::ostringstream os;
    os << "A0 (positive coefficients and equilibrium): " << (rep.a0_pass ? "pass" : "FAIL") << "\n";
    os << "A1 (positive definite interaction form):    " << (rep.a1_pass ? "pass" : "FAIL")
       << "   min symmetric-part eigenvalue = " << format_double(rep.min_sym_eig) << "\n";
    os << "A2 (real positive scaled spectrum):         " << (rep.a2_pass ? "pass" : "FAIL");
    if (rep.a2_pass)
        os << "   mu = (" << format_double(rep.mu[0]) << ", " << format_double(rep.mu[1]) << ")"
           << (rep.mu_distinct ? "" : "   [mu1 == mu2]");
    os << "\n";
    for (const auto& m : rep.messages) os << "note: " << m << "\n";
    os << "verdict: " << (rep.all_pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

int cmd_check(const Cli& cli, const RunConfig& cfg) {
    const HypothesisReport rep = check_hypotheses(cfg.A, cfg.r);
    const int w = write_text(cli, "hypotheses.txt", hypothesis_text(rep));
    if (w != exit_ok) return w;
    std::cout << (rep.all_pass() ? "hypotheses: PASS" : "hypotheses: FAIL") << "\n";
    return rep.all_pass() ? exit_ok : exit_hypotheses;
}

struct Pipeline {
    LVSystem sys;
    HopfWindow win;
    std::vector<OrbitCandidate> cats;
    CutoffProfile profile;
    ThetaGeometry geom;
};

Pipeline build_pipeline(const Cli& cli, const RunConfig& cfg) {
    Pipeline p;
    p.sys = make_system(cfg.A, cfg.r, cfg.tau);
    p.win = make_window(p.sys, cli.j_override);
    p.cats = catalog(p.sys, p.win);
    p.profile.alpha0 = cfg.alpha0;
    p.profile.lo = std::sqrt(cfg.radius_r);
    p.profile.hi = std::sqrt(cfg.radius_R);
    solve_amplitudes(p.cats, p.profile);
    double min_norm = 0.0;
    for (const auto& c : p.cats) {
        if (!c.amplitude_set) continue;
        const double n = std::sqrt(pi * c.amplitude * c.amplitude * (1.0 + double(c.k) * c.k));
        min_norm = min_norm == 0.0 ? n : std::min(min_norm, n);
    }
    p.geom = make_geometry(p.sys, p.win.lambda_hi, cfg.alpha0, cfg.radius_r, cfg.radius_R,
                           cfg.m1_override, min_norm);
    return p;
}

int cmd_spectrum(const Cli& cli, const RunConfig& cfg) {
    const HypothesisReport rep = check_hypotheses(cfg.A, cfg.r);
    if (!rep.all_pass()) {
        std::cerr << "hypotheses fail; run `lvp check` for details\n";
        return exit_hypotheses;
    }
    Pipeline p;
    try {
        p = build_pipeline(cli, cfg);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_no_window;
    }
    std::ostringstream os;
    os << "branch,k,n,lambda,period,beta_level,amplitude\n";
    for (const auto& c : p.cats) {
        os << c.branch + 1 << ',' << c.k << ',' << c.n << ',' << format_double(c.lambda) << ','
           << format_double(c.period) << ',' << format_double(c.beta_level) << ','
           << (c.amplitude_set ? format_double(c.amplitude) : "nan") << "\n";
    }
    const int w = write_text(cli, "catalog.csv", os.str());
    if (w != exit_ok) return w;
    std::cout << "catalog: " << p.cats.size() << " candidate(s), k0 = " << p.win.k0
              << ", window (" << format_double(p.win.lambda_lo) << ", "
              << format_double(p.win.lambda_hi) << ")\n";
    return exit_ok;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "t,u1,u2,du1,du2\n";
    for (size_t i = 0; i < traj.y.size(); ++i)
        os << format_double(traj.t[i]) << ',' << format_double(traj.y[i][0]) << ','
           << format_double(traj.y[i][1]) << ',' << format_double(traj.dy[i][0]) << ','
           << format_double(traj.dy[i][1]) << "\n";
    return os.str();
}

int cmd_simulate(const Cli& cli, const RunConfig& cfg, bool have_config) {
    Trajectory traj;
    double skip = 0.0;
    try {
        if (cli.logistic) {
            if (!(cli.alpha > 0.0)) {
                std::cerr << "--logistic requires --alpha\n";
                return exit_usage;
            }
            const double tau = cli.tau_flag > 0.0 ? cli.tau_flag : (have_config ? cfg.tau : 1.0);
            const double h = cfg.rk4_step > 0.0 ? cfg.rk4_step : tau / 512.0;
            traj = integrate_logistic(cli.alpha, tau, 0.5, cfg.t_end, h);
            skip = cfg.transient_skip > 0.0 ? cfg.transient_skip : 50.0 * tau;
        } else {
            const LVSystem sys = make_system(cfg.A, cfg.r, cfg.tau);
            const Vec2 start{sys.b[0] * (1.0 + cli.perturb), sys.b[1] * (1.0 - 0.6 * cli.perturb)};
            const auto hist = HistoryFunction::constant(start);
            traj = integrate(sys, hist, cfg.t_end, cfg.step(), Frame::original_u);
            skip = cfg.skip();
        }
    } catch (const Error& e) {
        if (e.code() == errc::blow_up || e.code() == errc::step_too_large) {
            std::cerr << e.what() << "\n";
            return exit_integration;
        }
        std::cerr << e.what() << "\n";
        return e.code() == errc::hypothesis_failed ? exit_hypotheses : exit_usage;
    }
    const int w = write_text(cli, "trajectory.csv", trajectory_csv(traj));
    if (w != exit_ok) return w;
    PeriodEstimate est;
    if (traj.t1 - traj.t0 > skip) est = estimate_period(traj, skip);
    if (est.ok)
        std::cout << "period=" << format_double(est.period)
                  << " confidence=" << format_double(est.confidence) << "\n";
    else
        std::cout << "period=nan confidence=0\n";
    return exit_ok;
}

std::string verification_text(const VerificationReport& rep, const OrbitSolution& sol) {
    std::ostringstream os;
    os << "lambda = " << format_double(sol.lambda) << "\n";
    os << "period = " << format_double(sol.period) << "\n";
    os << "sup residual = " << format_double(sol.residual) << "\n";
    os << "newton iterations = " << sol.newton_iters << "\n";
    os << "non_stationary = " << (rep.non_stationary ? "yes" : "no") << "\n";
    os << "zero_mean |mean| = " << format_double(rep.mean_abs) << "\n";
    os << "drift constants |c1| = " << format_double(rep.c1_abs) << "\n";
    os << "positivity margin min(b_i + x_i) = " << format_double(rep.theta_margin) << "\n";
    os << "delay-integration round trip rel err = " << format_double(rep.roundtrip_rel) << "\n";
    os << "in_window = " << (rep.in_window ? "yes" : "no") << "\n";
    os << "verdict: " << (rep.pass() ? "VERIFIED" : "NOT VERIFIED") << "\n";
    return os.str();
}

int cmd_find(const Cli& cli, const RunConfig& cfg) {
    const HypothesisReport rep = check_hypotheses(cfg.A, cfg.r);
    if (!rep.all_pass()) {
        std::cerr << "hypotheses fail; run `lvp check` for details\n";
        return exit_hypotheses;
    }
    Pipeline p;
    try {
        p = build_pipeline(cli, cfg);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_no_window;
    }
    std::vector<OrbitCandidate> cats = p.cats;
    if (cli.k_filter > 0) {
        std::erase_if(cats, [&](const OrbitCandidate& c) { return c.k != cli.k_filter; });
    }
    if (cats.empty()) {
        std::cerr << "empty candidate catalog\n";
        return exit_no_orbit;
    }

    CollocationProblem prob;
    prob.system = p.sys;
    prob.K = cfg.K;
    prob.M = cfg.M;
    prob.theta = 1.0;
    prob.beta_mode = BetaVariant::one;
    prob.geom = p.geom;
    NewtonOptions opts;
    opts.tol = cfg.newton_tol;
    opts.max_iters = cfg.max_iters;

    const auto sols = sweep(prob, p.win, cats, opts, cli.jobs, static_cast<unsigned>(cli.seed));
    if (sols.empty()) {
        std::cerr << "no orbit converged\n";
        return exit_no_orbit;
    }
    const OrbitSolution* best = &sols.front();
    for (const auto& s : sols)
        if (s.residual < best->residual) best = &s;

    const VerificationReport ver = verify_orbit(*best, prob, p.win);

    std::ostringstream orbit;
    orbit << "t,x1,x2\n";
    const int M = prob.grid();
    for (int q = 0; q < M; ++q) {
        const double t = 2.0 * pi * q / M;
        orbit << format_double(t) << ',' << format_double(best->loop.eval(0, t)) << ','
              << format_double(best->loop.eval(1, t)) << "\n";
    }
    int w = write_text(cli, "orbit.csv", orbit.str());
    if (w != exit_ok) return w;

    std::ostringstream meta;
    meta << "lambda=" << format_double(best->lambda) << "\n";
    meta << "period=" << format_double(best->period) << "\n";
    meta << "residual=" << format_double(best->residual) << "\n";
    meta << "K=" << cfg.K << "\n";
    w = write_text(cli, "orbit.meta", meta.str());
    if (w != exit_ok) return w;

    w = write_text(cli, "verification.txt", verification_text(ver, *best));
    if (w != exit_ok) return w;

    std::cout << "orbits found: " << sols.size() << ", best lambda = " << format_double(best->lambda)
              << ", period = " << format_double(best->period)
              << (ver.pass() ? " (verified)" : " (NOT verified)") << "\n";
    return ver.pass() ? exit_ok : exit_no_orbit;
}

int cmd_certify(const Cli& cli, const RunConfig& cfg) {
    CertifyConfig ccfg;
    ccfg.j_override = cli.j_override;
    ccfg.alpha0 = cfg.alpha0;
    ccfg.radius_r = cfg.radius_r;
    ccfg.radius_R = cfg.radius_R;
    ccfg.m1_override = cfg.m1_override;
    ccfg.K = std::max(64, cfg.K);

    const Certificate cert = certify(cfg.A, cfg.r, cfg.tau, ccfg);

    std::ostringstream os;
    os << "== hypotheses ==\n" << hypothesis_text(cert.hypotheses) << "\n";
    if (cert.have_window) {
        os << "== window ==\n";
        os << "n1 = " << cert.window.n1 << " (branch " << cert.window.branch_n1 + 1 << ")\n";
        os << "n2 = " << cert.window.n2 << " (branch " << cert.window.branch_n2 + 1 << ")\n";
        os << "j = " << cert.window.j << "\n";
        os << "lambda window = (" << format_double(cert.window.lambda_lo) << ", "
           << format_double(cert.window.lambda_hi) << ")\n";
        os << "k0 = " << cert.window.k0 << "\n\n";
        os << "== catalog ==\n";
        os << "branch,k,n,lambda,period,beta_level,amplitude\n";
        for (const auto& c : cert.catalog)
            os << c.branch + 1 << ',' << c.k << ',' << c.n << ',' << format_double(c.lambda)
               << ',' << format_double(c.period) << ',' << format_double(c.beta_level) << ','
               << (c.amplitude_set ? format_double(c.amplitude) : "nan") << "\n";
        os << "\n== indices ==\n";
        for (const auto& [cand, g] : cert.indices)
            os << "k = " << cand.k << ": index " << g.at(cand.k) << "\n";
        os << "\n== total ==\n";
        for (const auto& [k, v] : cert.total.components) os << "gamma_" << k << " = " << v << "\n";
        os << "\n";
    }
    os << "== narrative ==\n";
    for (const auto& line : cert.narrative) os << "- " << line << "\n";
    os << "\n== verdict ==\n";
    std::string verdict;
    if (cert.status == Certificate::Status::ok && cert.nontrivial) {
        verdict = "EXISTS: non-stationary periodic solution, k0=" + std::to_string(cert.window.k0);
    } else if (cert.status == Certificate::Status::hypothesis_failed) {
        verdict = "FAILED: hypotheses do not hold";
    } else if (cert.status == Certificate::Status::no_window) {
        verdict = "NO WINDOW: " + cert.error_message;
    } else {
        verdict = "DEGREE ERROR: " + cert.error_message;
    }
    os << verdict << "\n";

    int w = write_text(cli, "certificate.txt", os.str());
    if (w != exit_ok) return w;

    std::ostringstream kv;
    kv << "verdict=" << (cert.status == Certificate::Status::ok && cert.nontrivial ? "EXISTS"
                                                                                   : "NOT_PROVEN")
       << "\n";
    if (cert.have_window) {
        kv << "k0=" << cert.window.k0 << "\n";
        kv << "lambda_lo=" << format_double(cert.window.lambda_lo) << "\n";
        kv << "lambda_hi=" << format_double(cert.window.lambda_hi) << "\n";
        kv << "n1=" << cert.window.n1 << "\n";
        kv << "n2=" << cert.window.n2 << "\n";
        kv << "j=" << cert.window.j << "\n";
        std::set<int> ks;
        for (const auto& c : cert.catalog) ks.insert(c.k);
        for (int k : ks) kv << "total_gamma_" << k << "=" << cert.total.at(k) << "\n";
    }
    w = write_text(cli, "certificate.kv", kv.str());
    if (w != exit_ok) return w;

    std::cout << verdict << "\n";
    switch (cert.status) {
    case Certificate::Status::ok:
        return cert.nontrivial ? exit_ok : exit_degree;
    case Certificate::Status::hypothesis_failed:
        return exit_hypotheses;
    case Certificate::Status::no_window:
        return exit_no_window;
    case Certificate::Status::degree_error:
        return exit_degree;
    }
    return exit_degree;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"periodic-solution toolkit for two-species delayed Lotka-Volterra systems"};
    app.require_subcommand(1);
    app.fallthrough();

    Cli cli;
    app.add_option("--config", cli.config_path, "configuration file (key = value with [sections])");
    app.add_option("--out", cli.out_dir, "output directory (default: config's output.directory)");
    app.add_option("--seed", cli.seed, "seed for solver restarts (default 0)");
    app.add_option("--jobs", cli.jobs, "parallel candidate solves (default 1)");
    app.add_flag("--force", cli.force, "overwrite existing output files");
    app.add_option("--k", cli.k_filter, "restrict orbit finding to mode k");
    app.add_option("--j", cli.j_override, "window choice override");

    auto* c_check = app.add_subcommand("check", "evaluate hypotheses and write hypotheses.txt");
    auto* c_spectrum = app.add_subcommand("spectrum", "write the characteristic-value catalog CSV");
    auto* c_simulate = app.add_subcommand("simulate", "integrate the delay system, write trajectory.csv");
    c_simulate->add_flag("--logistic", cli.logistic, "scalar delay logistic mode");
    c_simulate->add_option("--alpha", cli.alpha, "logistic growth rate");
    c_simulate->add_option("--tau", cli.tau_flag, "delay override for --logistic");
    c_simulate->add_option("--perturb", cli.perturb, "relative equilibrium perturbation (default 0.05)");
    auto* c_find = app.add_subcommand("find", "solve for a periodic orbit, write orbit.csv");
    auto* c_certify = app.add_subcommand("certify", "full pipeline, write certificate files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    RunConfig cfg;
    bool have_config = false;
    if (!cli.config_path.empty()) {
        try {
            cfg = parse_config(cli.config_path);
            have_config = true;
        } catch (const Error& e) {
            std::cerr << e.what() << "\n";
            return exit_usage;
        }
    }
    const bool needs_config = !(c_simulate->parsed() && cli.logistic);
    if (!have_config && needs_config) {
        std::cerr << "--config is required for this command\n";
        return exit_usage;
    }
    if (cli.out_dir.empty()) cli.out_dir = cfg.directory;

    try {
        if (c_check->parsed()) return cmd_check(cli, cfg);
        if (c_spectrum->parsed()) return cmd_spectrum(cli, cfg);
        if (c_simulate->parsed()) return cmd_simulate(cli, cfg, have_config);
        if (c_find->parsed()) return cmd_find(cli, cfg);
        if (c_certify->parsed()) return cmd_certify(cli, cfg);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        switch (e.code()) {
        case errc::hypothesis_failed:
            return exit_hypotheses;
        case errc::no_window:
            return exit_no_window;
        case errc::blow_up:
        case errc::step_too_large:
            return exit_integration;
        case errc::sign_unstable:
        case errc::degenerate_orbit:
            return exit_degree;
        default:
            return exit_usage;
        }
    }
    return exit_usage;
}
