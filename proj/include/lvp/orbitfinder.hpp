#pragma once

#include <vector>

#include "lvp/field.hpp"
#include "lvp/fourier.hpp"
#include "lvp/model.hpp"
#include "lvp/spectrum.hpp"

namespace lvp {

/// Galerkin-collocation setup for 2pi-periodic solutions of the rescaled
/// system.  Unknowns: 4K Fourier coefficients + lambda; equations: residual
/// modes 1..K per component + one phase anchor.
struct CollocationProblem {
    LVSystem system;
    int K = 32;
    int M = 0; // grid size; defaults to 4K+1
    double theta = 1.0;
    BetaVariant beta_mode = BetaVariant::one;
    ThetaGeometry geom; // consulted when beta_mode != one

    int grid() const { return M > 0 ? M : 4 * K + 1; }
};

struct NewtonOptions {
    double tol = 1e-10;  // sup-norm of the collocation residual
    int max_iters = 50;
    double lambda_min = 1e-8;
    FourierLoop phase_ref; // anchor; empty -> the initial guess
};

enum class SolveStatus { converged, no_convergence, converged_to_zero, out_of_theta };

struct OrbitSolution {
    SolveStatus status = SolveStatus::no_convergence;
    FourierLoop loop;
    double lambda = 0.0;
    double period = 0.0;   // 2 pi lambda
    double residual = 0.0; // sup-norm over the grid
    int newton_iters = 0;
    bool in_window = false;
    bool in_theta = false;
};

/// Pointwise residual r(t) = x'(t) - RHS(t) on the problem grid; the delay is
/// handled exactly by per-mode rotation, the derivative per-mode.
GridPair residual(const FourierLoop& loop, double lambda, const CollocationProblem& prob);

double sup_norm(const GridPair& g);

/// Projected equation vector (4K+1): residual modes then the phase anchor
/// <x - ref, ref'>_{L2}.
std::vector<double> equation_vector(const FourierLoop& loop, double lambda,
                                    const CollocationProblem& prob, const FourierLoop& ref);

/// Analytic Jacobian of equation_vector, including the lambda column with the
/// derivative of the delay rotation.  Row-major (4K+1)^2.
std::vector<double> equation_jacobian(const FourierLoop& loop, double lambda,
                                      const CollocationProblem& prob, const FourierLoop& ref);

/// Damped Newton on coefficients + lambda with an integral phase anchor.
OrbitSolution newton_solve(const FourierLoop& guess, double lambda_guess,
                           const CollocationProblem& prob, const NewtonOptions& opts = {});

struct VerificationReport {
    double c1_abs = 0.0;          // max |c1_i|; zero at true solutions
    double mean_abs = 0.0;        // max component mean (representation-exact)
    double theta_margin = 0.0;    // min_t b_i + x_i(t)
    double roundtrip_rel = 0.0;   // delay-integration mismatch after one period
    bool non_stationary = false;
    bool in_theta = false;
    bool in_window = false;
    bool pass(double c1_tol = 1e-8, double roundtrip_tol = 1e-6) const {
        return non_stationary && in_theta && c1_abs < c1_tol && roundtrip_rel < roundtrip_tol;
    }
};

VerificationReport verify_orbit(const OrbitSolution& sol, const CollocationProblem& prob,
                                const HopfWindow& win);

/// Runs newton_solve for every catalog candidate (seed mapped through the
/// diagonalizer, a deterministic amplitude ladder plus seeded random
/// restarts) and deduplicates solutions equal up to phase shift.  Candidates
/// may be solved on up to `jobs` threads; the merge order stays the catalog
/// order.
std::vector<OrbitSolution> sweep(const CollocationProblem& prob, const HopfWindow& win,
                                 const std::vector<OrbitCandidate>& candidates,
                                 const NewtonOptions& opts = {}, int jobs = 1,
                                 unsigned seed = 0);

/// Smallest active mode index (the isotropy level) of a loop.
int isotropy_level(const FourierLoop& loop, double rel_tol = 1e-8);

} // namespace lvp
