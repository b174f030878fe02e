#pragma once

#include <string>
#include <vector>

#include "lvp/mat2.hpp"

namespace lvp {

/// Delayed Lotka-Volterra system data: interaction matrix A, growth rates r,
/// delay tau, and the derived equilibrium b, diagonalizer P and eigenvalues mu
/// of diag(b)*A.  mu is stored descending; P satisfies P*diag(b)*A*P^{-1} = diag(mu)
/// with unit-length rows.
struct LVSystem {
    Mat2 A;
    Vec2 r{};
    double tau = 0.0;

    Vec2 b{};
    Mat2 P;
    Mat2 Pinv;
    Vec2 mu{};

    // scaled interaction matrix diag(b)*A
    Mat2 scaled() const {
        Mat2 s = A;
        s.m[0] *= b[0];
        s.m[1] *= b[0];
        s.m[2] *= b[1];
        s.m[3] *= b[1];
        return s;
    }
};

struct HypothesisReport {
    bool a0_pass = false;
    bool a1_pass = false;
    bool a2_pass = false;
    double min_sym_eig = 0.0;
    bool mu_distinct = false;
    Vec2 mu{};
    std::vector<std::string> messages;

    bool all_pass() const { return a0_pass && a1_pass && a2_pass; }
};

/// Equilibrium b with A*b = r.  Throws errc::singular_matrix when
/// |det A| <= 1e-14 * ||A||^2.
Vec2 equilibrium(const Mat2& A, const Vec2& r);

/// Evaluates hypotheses A0 (positive coefficients and equilibrium),
/// A1 (positive definite interaction form) and A2 (real positive spectrum
/// of diag(b)*A) independently of one another.
HypothesisReport check_hypotheses(const Mat2& A, const Vec2& r);

/// Eigenvalues (descending) and row-normalized diagonalizer P of diag(b)*A.
/// Throws errc::degenerate_eigenvalues when mu1 == mu2 within tolerance.
void diagonalize(const Mat2& A, const Vec2& b, Vec2& mu_out, Mat2& P_out);

/// Full construction: equilibrium + hypothesis gate + diagonalization.
/// Throws errc::hypothesis_failed when any of A0-A2 fails.
LVSystem make_system(const Mat2& A, const Vec2& r, double tau);

} // namespace lvp
