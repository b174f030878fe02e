#include "lvp/degree.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lvp/errors.hpp"

namespace lvp {

namespace {
constexpr double pi = std::numbers::pi;
}

SigmaMap::SigmaMap(double lambda_lo, double lambda_hi, std::vector<double> interior) {
    std::sort(interior.begin(), interior.end());
    nodes_.push_back(lambda_lo);
    for (double v : interior) {
        if (v <= lambda_lo || v >= lambda_hi) fail(errc::precondition, "sigma node outside the window");
        if (!nodes_.empty() && std::abs(v - nodes_.back()) < 1e-14) continue;
        nodes_.push_back(v);
    }
    nodes_.push_back(lambda_hi);
}

// monotone cubic step between consecutive nodes, zero slope at every node
double SigmaMap::value(double lambda) const {
    if (nodes_.empty()) return lambda;
    if (lambda <= nodes_.front()) return lambda;
    if (lambda >= nodes_.back()) return lambda;
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), lambda);
    const double x1 = *it, x0 = *(it - 1);
    const double u = (lambda - x0) / (x1 - x0);
    return x0 + (x1 - x0) * u * u * (3.0 - 2.0 * u);
}

double SigmaMap::slope(double lambda) const {
    if (nodes_.empty()) return 1.0;
    if (lambda <= nodes_.front() || lambda >= nodes_.back()) return 1.0;
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), lambda);
    const double x1 = *it, x0 = *(it - 1);
    const double u = (lambda - x0) / (x1 - x0);
    return 6.0 * u * (1.0 - u);
}

SigmaMap sigma_map(const HopfWindow& win, const std::vector<OrbitCandidate>& catalog) {
    std::vector<double> interior;
    interior.reserve(catalog.size());
    for (const auto& c : catalog) interior.push_back(c.lambda);
    return SigmaMap(win.lambda_lo, win.lambda_hi, std::move(interior));
}

namespace {

// 2x2 rotation applied to a (cos, sin) coefficient pair
void rotate(double phase, double c, double s, double& co, double& so) {
    const double cp = std::cos(phase), sp = std::sin(phase);
    co = c * cp - s * sp;
    so = c * sp + s * cp;
}

// Coordinates on the isotropy-fixed subspace, diagonalized frame.
// Slot 0 = the candidate's branch, slot 1 = the other branch.
// Layout: [slot0 cos(1..P), slot0 sin(1..P), slot1 cos(1..P), slot1 sin(1..P), lambda],
// where entry p corresponds to the harmonic m = p*k.
struct Assembly {
    int k, P, N;
    double lambda, d, mu_b, mu_o, c_amp, beta0, xi_slope, sig, sig_slope, tau;

    int idx(int slot, int trig, int p) const { return 2 * P * slot + trig * P + (p - 1); }
};

Assembly make_assembly(const OrbitCandidate& cand, const LVSystem& sys,
                       const ThetaGeometry& geom, const SigmaMap& sigma, int K) {
    if (!cand.amplitude_set) fail(errc::precondition, "candidate amplitude not solved");
    Assembly a;
    a.k = cand.k;
    a.P = std::max(1, K / cand.k);
    a.N = 4 * a.P;
    a.lambda = cand.lambda;
    a.tau = sys.tau;
    a.d = sys.tau / cand.lambda;
    a.mu_b = sys.mu[cand.branch];
    a.mu_o = sys.mu[1 - cand.branch];
    a.c_amp = cand.amplitude;
    const double norm2 = pi * a.c_amp * a.c_amp * (1.0 + double(a.k) * a.k);
    a.beta0 = geom.profile.value(norm2);
    a.xi_slope = geom.profile.slope(norm2);
    // off the transition band the cutoff slope vanishes and the orbit is not
    // isolated in the radial direction
    if (!(a.xi_slope < 0.0))
        fail(errc::degenerate_orbit, "candidate amplitude falls outside the transition band");
    a.sig = sigma.value(cand.lambda);
    a.sig_slope = sigma.slope(cand.lambda);
    return a;
}

// Df as a dense (N x N+1) matrix: the derivative of the flattened map at the
// candidate, per-harmonic rotations plus the rank-one cutoff correction and
// the lambda column.
std::vector<double> derivative_matrix(const Assembly& a) {
    std::vector<double> T(size_t(a.N) * (a.N + 1), 0.0);
    auto put = [&](int r, int c, double v) { T[size_t(r) * (a.N + 1) + c] += v; };

    for (int slot = 0; slot < 2; ++slot) {
        const double mu = slot == 0 ? a.mu_b : a.mu_o;
        for (int p = 1; p <= a.P; ++p) {
            const int m = p * a.k;
            // column of a delayed harmonic: rotate by m*d, scale, integrate
            // (quarter turn / m)
            for (int trig = 0; trig < 2; ++trig) {
                const double c_in = trig == 0 ? 1.0 : 0.0;
                const double s_in = trig == 0 ? 0.0 : 1.0;
                double cd, sd;
                rotate(m * a.d, c_in, s_in, cd, sd);
                const double scale = -a.sig * a.beta0 * mu;
                double co, so;
                rotate(pi / 2.0, scale * cd / m, scale * sd / m, co, so);
                put(a.idx(slot, 0, p), a.idx(slot, trig, p), co);
                put(a.idx(slot, 1, p), a.idx(slot, trig, p), so);
            }
        }
    }

    // rank-one cutoff correction along the orbit direction: only the slot-0
    // cos-k column sees it; the response is the delayed orbit profile
    {
        const double inner = pi * (1.0 + double(a.k) * a.k) * a.c_amp; // <a0, e_cos_k>
        double cd, sd;
        rotate(a.k * a.d, a.c_amp, 0.0, cd, sd); // delayed orbit profile
        const double scale = -a.sig * 2.0 * a.xi_slope * inner * a.mu_b;
        double co, so;
        rotate(pi / 2.0, scale * cd / a.k, scale * sd / a.k, co, so);
        put(a.idx(0, 0, 1), a.idx(0, 0, 1), co);
        put(a.idx(0, 1, 1), a.idx(0, 0, 1), so);
    }

    // lambda column: sigma slope term + delay-phase derivative term
    {
        double acd, asd; // delayed orbit profile coefficients
        rotate(a.k * a.d, a.c_amp, 0.0, acd, asd);
        double dcd, dsd; // delayed orbit derivative coefficients
        rotate(a.k * a.d, 0.0, -a.k * a.c_amp, dcd, dsd);
        const double f1 = -a.beta0 * a.mu_b * a.sig_slope;
        const double f2 = -a.beta0 * a.mu_b * a.sig * a.tau / (a.lambda * a.lambda);
        const double gc = f1 * acd + f2 * dcd;
        const double gs = f1 * asd + f2 * dsd;
        double co, so;
        rotate(pi / 2.0, gc / a.k, gs / a.k, co, so);
        put(a.idx(0, 0, 1), a.N, co);
        put(a.idx(0, 1, 1), a.N, so);
    }
    return T;
}

} // namespace

BorderedOperator linearize_at(const OrbitCandidate& cand, const LVSystem& sys,
                              const ThetaGeometry& geom, const SigmaMap& sigma, int K) {
    const Assembly a = make_assembly(cand, sys, geom, sigma, K);
    BorderedOperator op;
    op.k = a.k;
    op.modes = a.P;
    op.dim = a.N;
    op.base = derivative_matrix(a);
    // Q - Df
    for (auto& v : op.base) v = -v;
    for (int r = 0; r < a.N; ++r) op.base[size_t(r) * (a.N + 1) + r] += 1.0;

    // kernel vector: the orbit tangent (a0', 0) with zero lambda slot
    op.kernel_vector.assign(size_t(a.N) + 1, 0.0);
    op.kernel_vector[size_t(a.idx(0, 1, 1))] = -a.c_amp * a.k;

    // functional row: scaled inner product of the norm against the tangent
    op.functional_row.assign(size_t(a.N) + 1, 0.0);
    double knorm2 = 0.0;
    for (int slot = 0; slot < 2; ++slot)
        for (int trig = 0; trig < 2; ++trig)
            for (int p = 1; p <= a.P; ++p) {
                const int m = p * a.k;
                const double w = pi * (1.0 + double(m) * m);
                const double kv = op.kernel_vector[size_t(a.idx(slot, trig, p))];
                knorm2 += w * kv * kv;
            }
    for (int slot = 0; slot < 2; ++slot)
        for (int trig = 0; trig < 2; ++trig)
            for (int p = 1; p <= a.P; ++p) {
                const int m = p * a.k;
                const double w = pi * (1.0 + double(m) * m);
                const int i = a.idx(slot, trig, p);
                op.functional_row[size_t(i)] = w * op.kernel_vector[size_t(i)] / knorm2;
            }
    return op;
}

std::vector<double> apply_linearization(const BorderedOperator& op, const std::vector<double>& w) {
    // Df = Q - base
    std::vector<double> out(size_t(op.dim), 0.0);
    for (int r = 0; r < op.dim; ++r) {
        double acc = 0.0;
        for (int c = 0; c <= op.dim; ++c) acc -= op.entry(r, c) * w[size_t(c)];
        acc += w[size_t(r)];
        out[size_t(r)] = acc;
    }
    return out;
}

namespace {

int bordered_sign(const BorderedOperator& op) {
    const int n = op.dim + 1;
    Eigen::MatrixXd M(n, n);
    for (int r = 0; r < op.dim; ++r)
        for (int c = 0; c < n; ++c) M(r, c) = op.entry(r, c);
    for (int c = 0; c < n; ++c) M(op.dim, c) = op.functional_row[size_t(c)];

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const auto& U = lu.matrixLU();
    double max_piv = 0.0, min_piv = std::numeric_limits<double>::infinity();
    int sign = lu.permutationP().determinant() > 0 ? 1 : -1;
    for (int i = 0; i < n; ++i) {
        const double piv = U(i, i);
        max_piv = std::max(max_piv, std::abs(piv));
        min_piv = std::min(min_piv, std::abs(piv));
        if (piv < 0.0) sign = -sign;
    }
    if (!(min_piv > 1e-10 * max_piv))
        fail(errc::degenerate_orbit, "bordered truncation is numerically singular");
    return sign;
}

} // namespace

GammaElement orbit_index(const OrbitCandidate& cand, const LVSystem& sys,
                         const ThetaGeometry& geom, const SigmaMap& sigma, int K) {
    const int Kk = std::max(cand.k, cand.k * (K / cand.k));
    const int s1 = bordered_sign(linearize_at(cand, sys, geom, sigma, Kk));
    const int s2 = bordered_sign(linearize_at(cand, sys, geom, sigma, 2 * Kk));
    if (s1 != s2) {
        std::ostringstream os;
        os << "determinant sign flips between truncations " << Kk << " and " << 2 * Kk;
        fail(errc::sign_unstable, os.str());
    }
    GammaElement g;
    g.set(cand.k, s1);
    return g;
}

GammaElement window_degree(const std::vector<OrbitCandidate>& catalog, const LVSystem& sys,
                           const ThetaGeometry& geom, const SigmaMap& sigma, int K) {
    GammaElement total;
    for (const auto& cand : catalog) total += orbit_index(cand, sys, geom, sigma, K);
    return total;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

} // namespace

Certificate certify(const Mat2& A, const Vec2& r, double tau, const CertifyConfig& cfg) {
    Certificate cert;
    cert.hypotheses = check_hypotheses(A, r);
    if (!cert.hypotheses.all_pass()) {
        cert.status = Certificate::Status::hypothesis_failed;
        cert.error_message = "hypotheses A0-A2 do not all hold";
        for (const auto& m : cert.hypotheses.messages) cert.narrative.push_back(m);
        return cert;
    }
    cert.narrative.push_back("hypotheses A0-A2 hold: positive coefficients and equilibrium, "
                             "positive definite interaction form, real positive spectrum");
    if (!cert.hypotheses.mu_distinct) {
        cert.status = Certificate::Status::no_window;
        cert.error_message = "mu1 == mu2, so n1 == n2 for every tau and no window exists";
        cert.narrative.push_back(cert.error_message);
        return cert;
    }

    cert.system = make_system(A, r, tau);
    cert.have_system = true;
    const auto& sys = cert.system;
    cert.narrative.push_back("equilibrium b = (" + fmt(sys.b[0]) + ", " + fmt(sys.b[1]) +
                             "), scaled-matrix eigenvalues mu = (" + fmt(sys.mu[0]) + ", " +
                             fmt(sys.mu[1]) + ")");

    try {
        cert.window = make_window(sys, cfg.j_override, cfg.j_max);
    } catch (const Error& e) {
        cert.status = Certificate::Status::no_window;
        cert.error_message = e.what();
        cert.narrative.push_back(std::string("no admissible window: ") + e.what());
        if (tau == 0.0)
            cert.narrative.push_back(
                "zero delay admits no non-stationary periodic solution: integrating the "
                "system over one period forces a quadratic form that is positive definite "
                "by the interaction hypothesis to vanish");
        return cert;
    }
    cert.have_window = true;
    const auto& win = cert.window;
    cert.narrative.push_back("winding numbers n1 = " + std::to_string(win.n1) + " (branch mu = " +
                             fmt(sys.mu[win.branch_n1]) + "), n2 = " + std::to_string(win.n2) +
                             " (branch mu = " + fmt(sys.mu[win.branch_n2]) + ")");
    cert.narrative.push_back("chose j = " + std::to_string(win.j) +
                             " with integer-part condition satisfied; window (" +
                             fmt(win.lambda_lo) + ", " + fmt(win.lambda_hi) + "), k0 = " +
                             std::to_string(win.k0));

    cert.catalog = catalog(sys, win);
    CutoffProfile profile;
    profile.alpha0 = cfg.alpha0;
    profile.lo = std::sqrt(cfg.radius_r);
    profile.hi = std::sqrt(cfg.radius_R);

    double min_norm = 0.0;
    try {
        for (auto& cand : cert.catalog) {
            cand.amplitude = amplitude_solve(cand, profile);
            cand.amplitude_set = true;
            const double n =
                std::sqrt(pi * cand.amplitude * cand.amplitude * (1.0 + double(cand.k) * cand.k));
            min_norm = min_norm == 0.0 ? n : std::min(min_norm, n);
        }
    } catch (const Error& e) {
        cert.status = Certificate::Status::degree_error;
        cert.error_message = std::string("candidate amplitude not realizable: ") + e.what();
        cert.narrative.push_back(cert.error_message);
        return cert;
    }
    cert.narrative.push_back("candidate catalog has " + std::to_string(cert.catalog.size()) +
                             " orbit(s); exactly one carries the isotropy level k0");

    ThetaGeometry geom;
    try {
        geom = make_geometry(sys, win.lambda_hi, cfg.alpha0, cfg.radius_r, cfg.radius_R,
                             cfg.m1_override, min_norm);
    } catch (const Error& e) {
        cert.status = Certificate::Status::degree_error;
        cert.error_message = e.what();
        return cert;
    }
    cert.narrative.push_back(
        "a priori box bounds confine every periodic solution of the window; the cutoff "
        "freezes the fixed-point field outside a bounded annulus, so the boundary of the "
        "annulus times the window carries no solutions of the whole homotopy");
    cert.narrative.push_back(
        "along the homotopy the nonlinear field deforms first to its linear part and then "
        "to the flattened-parameter field without boundary zeros, so the window degree is "
        "computed on the flattened field");

    const SigmaMap sigma = sigma_map(win, cert.catalog);
    try {
        for (const auto& cand : cert.catalog) {
            const GammaElement g = orbit_index(cand, sys, geom, sigma, cfg.K);
            cert.indices.emplace_back(cand, g);
            cert.total += g;
            cert.narrative.push_back("orbit k = " + std::to_string(cand.k) + ", n = " +
                                     std::to_string(cand.n) + ", lambda = " + fmt(cand.lambda) +
                                     ": index " + std::to_string(g.at(cand.k)) +
                                     " at its isotropy level, zero above it");
        }
    } catch (const Error& e) {
        cert.status = Certificate::Status::degree_error;
        cert.error_message = e.what();
        cert.narrative.push_back(std::string("index computation failed: ") + e.what());
        return cert;
    }

    cert.nontrivial = cert.total.at(win.k0) != 0;
    cert.narrative.push_back(
        "window degree = componentwise sum of the per-orbit indices (disjoint isolated "
        "orbits); the level-k0 component receives a single +-1 contribution because only "
        "the top winding index realizes k0, so it cannot cancel");
    cert.narrative.push_back(cert.nontrivial
                                 ? "total component at k0 is nonzero: a non-stationary "
                                   "periodic solution exists with period inside the window"
                                 : "total component at k0 vanished (unexpected)");
    cert.status = Certificate::Status::ok;
    return cert;
}

} // namespace lvp
