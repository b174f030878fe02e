#include "lvp/model.hpp"

#include <cmath>
#include <sstream>

#include "lvp/errors.hpp"

namespace lvp {

Vec2 equilibrium(const Mat2& A, const Vec2& r) {
    const double d = A.det();
    const double scale = A.norm();
    if (std::abs(d) <= 1e-14 * scale * scale)
        fail(errc::singular_matrix, "interaction matrix is singular (det ~ 0)");
    // Cramer
    return {(r[0] * A.m[3] - A.m[1] * r[1]) / d, (A.m[0] * r[1] - r[0] * A.m[2]) / d};
}

// Eigenvalues of a 2x2 matrix from trace/determinant.  Returns false when the
// discriminant is negative beyond tolerance (complex pair).
static bool real_eigs(const Mat2& B, Vec2& eigs) {
    const double tr = B.trace();
    const double disc = tr * tr - 4.0 * B.det();
    if (disc < -1e-12 * tr * tr) return false;
    const double s = std::sqrt(std::max(disc, 0.0));
    eigs = {0.5 * (tr + s), 0.5 * (tr - s)}; // descending
    return true;
}

HypothesisReport check_hypotheses(const Mat2& A, const Vec2& r) {
    HypothesisReport rep;

    // A0: positive coefficients and positive equilibrium
    bool entries_pos = true;
    for (double v : A.m) entries_pos = entries_pos && v > 0.0;
    Vec2 b{};
    bool have_b = false;
    try {
        b = equilibrium(A, r);
        have_b = true;
    } catch (const Error& e) {
        rep.messages.push_back(std::string("A0: ") + e.what());
    }
    rep.a0_pass = entries_pos && have_b && b[0] > 0.0 && b[1] > 0.0;
    if (!entries_pos) rep.messages.push_back("A0: some interaction coefficient is not positive");
    if (have_b && !(b[0] > 0.0 && b[1] > 0.0))
        rep.messages.push_back("A0: equilibrium has a non-positive component");

    // A1: <Ax,x> > 0 for all x != 0, i.e. symmetric part positive definite
    const Vec2 se = sym_part_eigs(A);
    rep.min_sym_eig = se[0];
    rep.a1_pass = se[0] > 0.0;
    if (!rep.a1_pass) {
        std::ostringstream os;
        os << "A1: symmetric part has eigenvalue " << se[0] << " <= 0";
        rep.messages.push_back(os.str());
    }

    // A2: diag(b)*A has two real positive eigenvalues
    if (have_b) {
        Mat2 B = A;
        B.m[0] *= b[0];
        B.m[1] *= b[0];
        B.m[2] *= b[1];
        B.m[3] *= b[1];
        Vec2 mu{};
        if (!real_eigs(B, mu)) {
            rep.a2_pass = false;
            rep.messages.push_back("A2: scaled matrix has a complex eigenvalue pair");
        } else {
            rep.mu = mu;
            rep.a2_pass = mu[0] > 0.0 && mu[1] > 0.0;
            if (!rep.a2_pass) rep.messages.push_back("A2: scaled matrix has a non-positive eigenvalue");
            rep.mu_distinct = std::abs(mu[0] - mu[1]) > 1e-10 * std::max(std::abs(mu[0]), std::abs(mu[1]));
            if (!rep.mu_distinct)
                rep.messages.push_back("note: mu1 == mu2, so equal winding numbers on both branches");
        }
    } else {
        rep.a2_pass = false;
        rep.messages.push_back("A2: skipped, no equilibrium");
    }
    return rep;
}

void diagonalize(const Mat2& A, const Vec2& b, Vec2& mu_out, Mat2& P_out) {
    Mat2 B = A;
    B.m[0] *= b[0];
    B.m[1] *= b[0];
    B.m[2] *= b[1];
    B.m[3] *= b[1];

    Vec2 mu{};
    if (!real_eigs(B, mu)) fail(errc::degenerate_eigenvalues, "scaled matrix has complex eigenvalues");
    if (std::abs(mu[0] - mu[1]) <= 1e-10 * std::max(std::abs(mu[0]), std::abs(mu[1])))
        fail(errc::degenerate_eigenvalues, "mu1 == mu2 within tolerance; diagonalization frame not unique");

    // Rows of P are left eigenvectors of B: p (B - mu I) = 0.
    auto left_eigvec = [&](double lam) -> Vec2 {
        const double a = B.m[0] - lam, c = B.m[2];
        const double bb = B.m[1], d = B.m[3] - lam;
        // p = (p1,p2) with p1*a + p2*c = 0 and p1*bb + p2*d = 0; pick the better-conditioned row
        Vec2 p{};
        if (std::abs(a) + std::abs(c) >= std::abs(bb) + std::abs(d)) {
            p = {c, -a};
        } else {
            p = {d, -bb};
        }
        const double n = std::hypot(p[0], p[1]);
        if (n == 0.0) return {1.0, 0.0};
        return {p[0] / n, p[1] / n};
    };

    Mat2 P;
    const Vec2 p0 = left_eigvec(mu[0]);
    const Vec2 p1 = left_eigvec(mu[1]);
    P.m = {p0[0], p0[1], p1[0], p1[1]};
    if (std::abs(P.det()) <= 1e-12)
        fail(errc::degenerate_eigenvalues, "eigenvector basis is numerically degenerate");

    // fix orientation for determinism: first nonzero entry of each row positive
    for (int i = 0; i < 2; ++i) {
        const double lead = std::abs(P(i, 0)) > 1e-14 ? P(i, 0) : P(i, 1);
        if (lead < 0.0) {
            P(i, 0) = -P(i, 0);
            P(i, 1) = -P(i, 1);
        }
    }

    mu_out = mu;
    P_out = P;
}

LVSystem make_system(const Mat2& A, const Vec2& r, double tau) {
    HypothesisReport rep = check_hypotheses(A, r);
    if (!rep.all_pass()) {
        std::string msg = "hypotheses failed:";
        for (const auto& m : rep.messages) msg += " " + m + ";";
        fail(errc::hypothesis_failed, msg);
    }
    LVSystem sys;
    sys.A = A;
    sys.r = r;
    sys.tau = tau;
    sys.b = equilibrium(A, r);
    diagonalize(A, sys.b, sys.mu, sys.P);
    sys.Pinv = inverse(sys.P);
    return sys;
}

} // namespace lvp
