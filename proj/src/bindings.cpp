// Python bindings for the main pipeline operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <numbers>

#include "lvp/degree.hpp"
#include "lvp/dde.hpp"
#include "lvp/orbitfinder.hpp"

namespace py = pybind11;
using namespace lvp;

namespace {

constexpr double pi = std::numbers::pi;

Mat2 to_mat(const std::array<std::array<double, 2>, 2>& a) {
    return Mat2{{a[0][0], a[0][1], a[1][0], a[1][1]}};
}

py::dict hypothesis_dict(const HypothesisReport& rep) {
    py::dict d;
    d["a0_pass"] = rep.a0_pass;
    d["a1_pass"] = rep.a1_pass;
    d["a2_pass"] = rep.a2_pass;
    d["min_sym_eig"] = rep.min_sym_eig;
    d["mu"] = std::vector<double>{rep.mu[0], rep.mu[1]};
    d["mu_distinct"] = rep.mu_distinct;
    d["messages"] = rep.messages;
    d["all_pass"] = rep.all_pass();
    return d;
}

py::dict candidate_dict(const OrbitCandidate& c) {
    py::dict d;
    d["branch"] = c.branch + 1;
    d["k"] = c.k;
    d["n"] = c.n;
    d["lambda"] = c.lambda;
    d["period"] = c.period;
    d["beta_level"] = c.beta_level;
    if (c.amplitude_set) d["amplitude"] = c.amplitude;
    return d;
}

struct PipelineArgs {
    Mat2 A;
    Vec2 r;
    double tau;
};

PipelineArgs args_from(const std::array<std::array<double, 2>, 2>& A,
                       const std::array<double, 2>& r, double tau) {
    return {to_mat(A), Vec2{r[0], r[1]}, tau};
}

} // namespace

PYBIND11_MODULE(lvperiodic, m) {
    m.doc() = "periodic solutions of two-species delayed Lotka-Volterra systems: "
              "hypothesis checks, spectral catalog, direct simulation, orbit finding "
              "and the symmetry-degree certificate";

    m.def(
        "check_hypotheses",
        [](const std::array<std::array<double, 2>, 2>& A, const std::array<double, 2>& r) {
            const auto a = args_from(A, r, 1.0);
            return hypothesis_dict(check_hypotheses(a.A, a.r));
        },
        py::arg("A"), py::arg("r"),
        "Evaluate the positivity, interaction-form and spectrum hypotheses.");

    m.def(
        "equilibrium",
        [](const std::array<std::array<double, 2>, 2>& A, const std::array<double, 2>& r) {
            const auto a = args_from(A, r, 1.0);
            const Vec2 b = equilibrium(a.A, a.r);
            return std::vector<double>{b[0], b[1]};
        },
        py::arg("A"), py::arg("r"));

    m.def(
        "spectrum",
        [](const std::array<std::array<double, 2>, 2>& A, const std::array<double, 2>& r,
           double tau, int j_override) {
            const auto a = args_from(A, r, tau);
            const LVSystem sys = make_system(a.A, a.r, a.tau);
            const HopfWindow win = make_window(sys, j_override);
            auto cats = catalog(sys, win);
            CutoffProfile prof{0.05, std::sqrt(0.01), std::sqrt(100.0)};
            solve_amplitudes(cats, prof);
            py::dict d;
            d["mu"] = std::vector<double>{sys.mu[0], sys.mu[1]};
            d["n1"] = win.n1;
            d["n2"] = win.n2;
            d["j"] = win.j;
            d["k0"] = win.k0;
            d["lambda_lo"] = win.lambda_lo;
            d["lambda_hi"] = win.lambda_hi;
            py::list entries;
            for (const auto& c : cats) entries.append(candidate_dict(c));
            d["catalog"] = entries;
            return d;
        },
        py::arg("A"), py::arg("r"), py::arg("tau"), py::arg("j") = 0,
        "Winding numbers, the lambda window and the characteristic-value catalog.");

    m.def(
        "simulate",
        [](const std::array<std::array<double, 2>, 2>& A, const std::array<double, 2>& r,
           double tau, double t_end, double h, double perturb) {
            const auto a = args_from(A, r, tau);
            const LVSystem sys = make_system(a.A, a.r, a.tau);
            const Vec2 start{sys.b[0] * (1.0 + perturb), sys.b[1] * (1.0 - 0.6 * perturb)};
            const Trajectory traj =
                integrate(sys, HistoryFunction::constant(start), t_end,
                          h > 0.0 ? h : tau / 512.0, Frame::original_u);
            py::dict d;
            std::vector<double> t(traj.t), u1, u2;
            u1.reserve(traj.y.size());
            u2.reserve(traj.y.size());
            for (const auto& y : traj.y) {
                u1.push_back(y[0]);
                u2.push_back(y[1]);
            }
            d["t"] = t;
            d["u1"] = u1;
            d["u2"] = u2;
            const PeriodEstimate est = estimate_period(traj, 0.5 * t_end);
            if (est.ok) {
                d["period"] = est.period;
                d["confidence"] = est.confidence;
            }
            return d;
        },
        py::arg("A"), py::arg("r"), py::arg("tau"), py::arg("t_end") = 300.0,
        py::arg("h") = 0.0, py::arg("perturb") = 0.05,
        "Method-of-steps integration from a perturbed equilibrium history.");

    m.def(
        "simulate_logistic",
        [](double alpha, double tau, double t_end, double h) {
            const Trajectory traj =
                integrate_logistic(alpha, tau, 0.5, t_end, h > 0.0 ? h : tau / 512.0);
            py::dict d;
            std::vector<double> t(traj.t), u;
            u.reserve(traj.y.size());
            for (const auto& y : traj.y) u.push_back(y[0]);
            d["t"] = t;
            d["u"] = u;
            const PeriodEstimate est = estimate_period(traj, 0.5 * t_end);
            if (est.ok) {
                d["period"] = est.period;
                d["confidence"] = est.confidence;
            }
            return d;
        },
        py::arg("alpha"), py::arg("tau") = 1.0, py::arg("t_end") = 300.0, py::arg("h") = 0.0,
        "Scalar delay logistic simulation.");

    m.def(
        "find_orbit",
        [](const std::array<std::array<double, 2>, 2>& A, const std::array<double, 2>& r,
           double tau, int K, double tol) {
            const auto a = args_from(A, r, tau);
            const LVSystem sys = make_system(a.A, a.r, a.tau);
            const HopfWindow win = make_window(sys);
            auto cats = catalog(sys, win);
            CutoffProfile prof{0.05, std::sqrt(0.01), std::sqrt(100.0)};
            solve_amplitudes(cats, prof);
            double min_norm = 0.0;
            for (const auto& c : cats) {
                if (!c.amplitude_set) continue;
                const double n =
                    std::sqrt(pi * c.amplitude * c.amplitude * (1.0 + double(c.k) * c.k));
                min_norm = min_norm == 0.0 ? n : std::min(min_norm, n);
            }
            CollocationProblem prob;
            prob.system = sys;
            prob.K = K;
            prob.geom = make_geometry(sys, win.lambda_hi, 0.05, 0.01, 100.0, 0.0, min_norm);
            NewtonOptions opts;
            opts.tol = tol;
            const auto sols = sweep(prob, win, cats, opts);
            py::list out;
            for (const auto& sol : sols) {
                py::dict d;
                d["lambda"] = sol.lambda;
                d["period"] = sol.period;
                d["residual"] = sol.residual;
                d["isotropy"] = isotropy_level(sol.loop);
                const int M = prob.grid();
                std::vector<double> t, x1, x2;
                for (int q = 0; q < M; ++q) {
                    const double tt = 2.0 * pi * q / M;
                    t.push_back(tt);
                    x1.push_back(sol.loop.eval(0, tt));
                    x2.push_back(sol.loop.eval(1, tt));
                }
                d["t"] = t;
                d["x1"] = x1;
                d["x2"] = x2;
                const VerificationReport rep = verify_orbit(sol, prob, win);
                d["verified"] = rep.pass();
                d["roundtrip_rel"] = rep.roundtrip_rel;
                out.append(d);
            }
            return out;
        },
        py::arg("A"), py::arg("r"), py::arg("tau"), py::arg("K") = 32, py::arg("tol") = 1e-10,
        "Solve for periodic orbits seeded from the catalog; returns verified solutions.");

    m.def(
        "certify",
        [](const std::array<std::array<double, 2>, 2>& A, const std::array<double, 2>& r,
           double tau, int j_override, int K) {
            const auto a = args_from(A, r, tau);
            CertifyConfig cfg;
            cfg.j_override = j_override;
            cfg.K = K;
            const Certificate cert = certify(a.A, a.r, a.tau, cfg);
            py::dict d;
            switch (cert.status) {
            case Certificate::Status::ok:
                d["status"] = "ok";
                break;
            case Certificate::Status::hypothesis_failed:
                d["status"] = "hypothesis_failed";
                break;
            case Certificate::Status::no_window:
                d["status"] = "no_window";
                break;
            case Certificate::Status::degree_error:
                d["status"] = "degree_error";
                break;
            }
            d["nontrivial"] = cert.nontrivial;
            d["hypotheses"] = hypothesis_dict(cert.hypotheses);
            if (!cert.error_message.empty()) d["error"] = cert.error_message;
            if (cert.have_window) {
                d["k0"] = cert.window.k0;
                d["n1"] = cert.window.n1;
                d["n2"] = cert.window.n2;
                d["j"] = cert.window.j;
                d["lambda_lo"] = cert.window.lambda_lo;
                d["lambda_hi"] = cert.window.lambda_hi;
                py::list entries;
                for (const auto& c : cert.catalog) entries.append(candidate_dict(c));
                d["catalog"] = entries;
                py::dict total;
                for (const auto& [k, v] : cert.total.components)
                    total[py::int_(k)] = v;
                d["total"] = total;
            }
            d["narrative"] = cert.narrative;
            return d;
        },
        py::arg("A"), py::arg("r"), py::arg("tau"), py::arg("j") = 0, py::arg("K") = 64,
        "Full existence certificate; nontrivial means the degree component at k0 is nonzero.");
}
