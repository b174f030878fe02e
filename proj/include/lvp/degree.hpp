#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lvp/field.hpp"
#include "lvp/model.hpp"
#include "lvp/spectrum.hpp"

namespace lvp {

/// Element of Z_2 + (free abelian group on N): one parity slot plus a sparse
/// integer map indexed by the isotropy level k.
struct GammaElement {
    int gamma0 = 0; // parity slot; carried but never computed here
    std::map<int, int> components;

    int at(int k) const {
        auto it = components.find(k);
        return it == components.end() ? 0 : it->second;
    }
    void set(int k, int v) {
        if (v == 0)
            components.erase(k);
        else
            components[k] = v;
    }
    bool is_zero() const { return gamma0 == 0 && components.empty(); }

    GammaElement& operator+=(const GammaElement& o) {
        gamma0 = (gamma0 + o.gamma0) % 2;
        for (const auto& [k, v] : o.components) set(k, at(k) + v);
        return *this;
    }
};

/// Increasing C^1 reparameterization of the window fixing the endpoints and
/// flattening at every characteristic value (value fixed, slope zero).
class SigmaMap {
public:
    SigmaMap() = default;
    SigmaMap(double lambda_lo, double lambda_hi, std::vector<double> interior_nodes);

    double value(double lambda) const;
    double slope(double lambda) const;

private:
    std::vector<double> nodes_; // lambda_lo, sorted interior, lambda_hi
};

SigmaMap sigma_map(const HopfWindow& win, const std::vector<OrbitCandidate>& catalog);

/// Finite truncation of the linearization at a candidate orbit on the fixed
/// subspace of its isotropy (modes divisible by k, in diagonalized
/// coordinates), with the lambda column appended and a functional row
/// normalized on the kernel tangent vector.
struct BorderedOperator {
    int k = 0;      // isotropy level
    int modes = 0;  // number of retained harmonics K/k
    int dim = 0;    // base row count: 4 * modes
    // base: dim x (dim+1) row-major, the derivative complement Q - Df
    std::vector<double> base;
    std::vector<double> functional_row; // dim+1 entries
    std::vector<double> kernel_vector;  // dim+1 entries, the orbit tangent

    double entry(int r, int c) const { return base[size_t(r) * (dim + 1) + c]; }
};

/// Assembles the bordered operator.  K is rounded down to a multiple of
/// candidate.k.  Requires the candidate amplitude to be set.
BorderedOperator linearize_at(const OrbitCandidate& cand, const LVSystem& sys,
                              const ThetaGeometry& geom, const SigmaMap& sigma, int K);

/// Applies the truncated derivative Df (not Q - Df) to a coefficient vector
/// of length dim+1; returns dim entries.  Exposed for the eigenpair checks.
std::vector<double> apply_linearization(const BorderedOperator& op,
                                        const std::vector<double>& w);

/// Determinant sign of the bordered truncation, verified stable between
/// truncations K and 2K.  Throws errc::sign_unstable on disagreement and
/// errc::degenerate_orbit when a pivot collapses.
GammaElement orbit_index(const OrbitCandidate& cand, const LVSystem& sys,
                         const ThetaGeometry& geom, const SigmaMap& sigma, int K);

/// Componentwise sum of the per-candidate indices.
GammaElement window_degree(const std::vector<OrbitCandidate>& catalog, const LVSystem& sys,
                           const ThetaGeometry& geom, const SigmaMap& sigma, int K);

struct CertifyConfig {
    int j_override = 0;
    int j_max = 1000;
    int K = 64;
    double alpha0 = 0.05;
    double radius_r = 0.01;
    double radius_R = 100.0;
    double m1_override = 0.0;
};

struct Certificate {
    enum class Status { ok, hypothesis_failed, no_window, degree_error };
    Status status = Status::degree_error;
    std::string error_message;

    HypothesisReport hypotheses;
    bool have_system = false;
    LVSystem system;
    bool have_window = false;
    HopfWindow window;
    std::vector<OrbitCandidate> catalog;
    std::vector<std::pair<OrbitCandidate, GammaElement>> indices;
    GammaElement total;
    bool nontrivial = false;
    std::vector<std::string> narrative;
};

/// Full pipeline: hypotheses, spectral window, candidate catalog with
/// amplitudes, geometry, per-orbit indices, componentwise total, and the
/// nontriviality verdict total[k0] != 0.
Certificate certify(const Mat2& A, const Vec2& r, double tau, const CertifyConfig& cfg = {});

} // namespace lvp
