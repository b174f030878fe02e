#pragma once

#include <vector>

#include "lvp/cutoff.hpp"
#include "lvp/model.hpp"

namespace lvp {

enum class WindingStatus { ok, boundary, no_winding };

struct WindingResult {
    WindingStatus status = WindingStatus::no_winding;
    int n = -1;
};

/// Winding number n with pi/2 + 2n pi < mu*tau < pi/2 + 2(n+1) pi.
/// boundary when mu*tau sits within 1e-9 of an endpoint, no_winding when
/// mu*tau <= pi/2.
WindingResult winding_number(double mu, double tau);

/// Phi(n1,n2) = { j : floor(n1/j) < floor(n2/j) = n2/j }, enumerated up to
/// j_max.  Nonempty whenever n1 < n2.  Throws errc::empty_phi when n1 >= n2.
std::vector<int> phi_set(int n1, int n2, int j_max = 1000);

/// The lambda window for a chosen j together with the distinguished isotropy
/// level k0 = n2/j.  Branch order is relabeled so n1 < n2.
struct HopfWindow {
    int n1 = 0, n2 = 0;       // winding numbers, n1 < n2
    int branch_n1 = 0;        // index into LVSystem::mu of the n1 branch
    int branch_n2 = 1;        // index into LVSystem::mu of the n2 branch
    int j = 1;                // chosen element of Phi(n1,n2)
    double lambda_lo = 0.0;   // tau / (2(j+1)pi)
    double lambda_hi = 0.0;   // tau / (2 j pi)
    int k0 = 0;               // n2 / j
};

HopfWindow window(const LVSystem& sys, int j, int n1, int n2, int branch_n1, int branch_n2);

/// Window construction straight from the system: windings for both branches,
/// relabeling so n1 < n2, j = min Phi by default (j_override > 0 forces j).
/// Throws errc::no_window when a branch has no winding number, sits on a
/// boundary, or n1 == n2.
HopfWindow make_window(const LVSystem& sys, int j_override = 0, int j_max = 1000);

/// A predicted non-degenerate orbit of the cutoff-modified problem.
struct OrbitCandidate {
    int branch = 0;        // index into LVSystem::mu
    int k = 0;             // Fourier mode = isotropy Z_k
    int n = 0;             // winding index of the characteristic value
    double lambda = 0.0;   // k tau / (pi/2 + 2 n pi)
    double period = 0.0;   // 2 pi lambda
    double beta_level = 0.0; // k / (lambda mu_branch), in (0,1)
    double amplitude = 0.0;  // c_{i,k} of the modified system; 0 until solved
    bool amplitude_set = false;
};

/// Enumerates all candidates (k,n) per branch with 1 <= k <= floor(n_i/j),
/// n <= n_i and kj <= n < k(j+1); sorted by k then branch.  Exactly one
/// entry carries k = k0.
std::vector<OrbitCandidate> catalog(const LVSystem& sys, const HopfWindow& win);

/// Amplitude c > 0 with xi(pi c^2 (1+k^2)) = beta_level, solved by bisection
/// on the strictly decreasing transition band.  Throws errc::level_out_of_range
/// when beta_level is not strictly inside (alpha0, 1).
double amplitude_solve(const OrbitCandidate& cand, const CutoffProfile& profile);

/// Solves amplitudes for every candidate in place; entries whose level falls
/// outside (alpha0,1) keep amplitude_set = false.
void solve_amplitudes(std::vector<OrbitCandidate>& cats, const CutoffProfile& profile);

} // namespace lvp
