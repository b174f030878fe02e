#include "lvp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lvp/errors.hpp"

namespace lvp {

namespace {
constexpr double pi = std::numbers::pi;
}

WindingResult winding_number(double mu, double tau) {
    const double x = mu * tau;
    // guard band around the open interval endpoints pi/2 + 2m pi
    const long m = std::lround((x - pi / 2.0) / (2.0 * pi));
    if (m >= 0 && std::abs(x - (pi / 2.0 + 2.0 * m * pi)) < 1e-9)
        return {WindingStatus::boundary, static_cast<int>(m)};
    if (x <= pi / 2.0) return {WindingStatus::no_winding, -1};
    const int n = static_cast<int>(std::floor((x - pi / 2.0) / (2.0 * pi)));
    return {WindingStatus::ok, n};
}

std::vector<int> phi_set(int n1, int n2, int j_max) {
    if (n1 >= n2) fail(errc::empty_phi, "Phi(n1,n2) requires n1 < n2");
    std::vector<int> out;
    const int top = std::min(j_max, n2); // j must divide n2
    for (int j = 1; j <= top; ++j) {
        if (n2 % j != 0) continue;
        if (n1 / j < n2 / j) out.push_back(j);
    }
    return out;
}

HopfWindow window(const LVSystem& sys, int j, int n1, int n2, int branch_n1, int branch_n2) {
    if (n1 >= n2) fail(errc::precondition, "window requires n1 < n2");
    if (j < 1 || n2 % j != 0 || n1 / j >= n2 / j) fail(errc::precondition, "j not in Phi(n1,n2)");
    HopfWindow w;
    w.n1 = n1;
    w.n2 = n2;
    w.branch_n1 = branch_n1;
    w.branch_n2 = branch_n2;
    w.j = j;
    w.lambda_lo = sys.tau / (2.0 * (j + 1) * pi);
    w.lambda_hi = sys.tau / (2.0 * j * pi);
    w.k0 = n2 / j;
    return w;
}

HopfWindow make_window(const LVSystem& sys, int j_override, int j_max) {
    WindingResult wr[2];
    for (int i = 0; i < 2; ++i) {
        wr[i] = winding_number(sys.mu[i], sys.tau);
        if (wr[i].status == WindingStatus::no_winding) {
            std::ostringstream os;
            os << "mu*tau = " << sys.mu[i] * sys.tau << " <= pi/2 on branch " << i + 1
               << ", no winding number";
            fail(errc::no_window, os.str());
        }
        if (wr[i].status == WindingStatus::boundary) {
            std::ostringstream os;
            os << "mu*tau sits on a window boundary for branch " << i + 1;
            fail(errc::no_window, os.str());
        }
    }
    if (wr[0].n == wr[1].n)
        fail(errc::no_window, "n1 == n2: both branches share the winding number " +
                                  std::to_string(wr[0].n));

    // relabel so n1 < n2
    int b1 = 0, b2 = 1;
    if (wr[0].n > wr[1].n) std::swap(b1, b2);
    const int n1 = wr[b1].n, n2 = wr[b2].n;

    const auto phis = phi_set(n1, n2, j_max);
    int j = phis.front(); // min Phi: widest window
    if (j_override > 0) {
        if (std::find(phis.begin(), phis.end(), j_override) == phis.end())
            fail(errc::precondition, "requested j is not in Phi(n1,n2)");
        j = j_override;
    }
    return window(sys, j, n1, n2, b1, b2);
}

std::vector<OrbitCandidate> catalog(const LVSystem& sys, const HopfWindow& win) {
    std::vector<OrbitCandidate> out;
    const int branches[2] = {win.branch_n1, win.branch_n2};
    const int windings[2] = {win.n1, win.n2};
    for (int bi = 0; bi < 2; ++bi) {
        const int branch = branches[bi];
        const int ni = windings[bi];
        const double mu = sys.mu[branch];
        for (int k = 1; k <= ni / win.j; ++k) {
            for (int n = k * win.j; n < k * (win.j + 1) && n <= ni; ++n) {
                if (n < 1) continue;
                OrbitCandidate cand;
                cand.branch = branch;
                cand.k = k;
                cand.n = n;
                cand.lambda = k * sys.tau / (pi / 2.0 + 2.0 * n * pi);
                cand.period = 2.0 * pi * cand.lambda;
                cand.beta_level = k / (cand.lambda * mu);
                out.push_back(cand);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const OrbitCandidate& a, const OrbitCandidate& b) {
        if (a.k != b.k) return a.k < b.k;
        if (a.branch != b.branch) return a.branch < b.branch;
        return a.n < b.n;
    });
    return out;
}

double amplitude_solve(const OrbitCandidate& cand, const CutoffProfile& profile) {
    const double level = cand.beta_level;
    if (!(level > profile.alpha0 && level < 1.0))
        fail(errc::level_out_of_range, "beta level outside (alpha0, 1)");
    const double norm2 = profile.inverse(level); // pi c^2 (1 + k^2)
    return std::sqrt(norm2 / (pi * (1.0 + double(cand.k) * cand.k)));
}

void solve_amplitudes(std::vector<OrbitCandidate>& cats, const CutoffProfile& profile) {
    for (auto& cand : cats) {
        if (cand.beta_level > profile.alpha0 && cand.beta_level < 1.0) {
            cand.amplitude = amplitude_solve(cand, profile);
            cand.amplitude_set = true;
        }
    }
}

} // namespace lvp
