#pragma once

#include <functional>

#include "lvp/cutoff.hpp"
#include "lvp/fourier.hpp"
#include "lvp/model.hpp"

namespace lvp {

/// Exponential box bounds confining periodic solutions, plus the derivative
/// bound; evaluated at the top of the lambda window.
struct AprioriBounds {
    double d1 = 0.0, d2 = 0.0; // lower box margins: -b_i < -d_i < x_i
    double d3 = 0.0, d4 = 0.0; // upper box margins: x_i < d_{i+2}
    double m0 = 0.0;           // sup-norm bound on the derivatives
};

/// Throws errc::bound_overflow when an exponent exceeds 700.
AprioriBounds apriori_bounds(const LVSystem& sys, double lambda_hi);

enum class BetaVariant { one, distance, radial };

/// The annular-set geometry with its cutoff: box bounds, derivative bound,
/// isolation radius around the origin, and the radial cutoff profile.
struct ThetaGeometry {
    AprioriBounds bounds;
    Vec2 b{};               // equilibrium (box reference)
    double m1 = 0.0;        // isolation radius; the excluded ball has radius m1/2
    double delta0 = 1.0;    // boundary margin feeding the distance-variant ramp
    CutoffProfile profile;  // radial cutoff on the squared norm

    double radius_r() const { return profile.lo * profile.lo; }
    double radius_R() const { return profile.hi * profile.hi; }
};

/// Assembles the geometry from the a priori bounds and configuration.
/// m1 defaults to half the smallest candidate-loop norm when m1_override <= 0.
ThetaGeometry make_geometry(const LVSystem& sys, double lambda_hi, double alpha0,
                            double radius_r, double radius_R, double m1_override,
                            double smallest_candidate_norm);

/// Cutoff value in [alpha0, 1]: radial variant applies the profile to the
/// squared norm; distance variant applies a ramp to a squared-margin
/// surrogate of the distance to the boundary of the annular set.
double beta(const FourierLoop& x, const ThetaGeometry& geom, BetaVariant variant);

/// Gradient factor of the radial variant: d/dx beta = 2 slope(|x|^2) <x, .>.
double beta_radial_slope(const FourierLoop& x, const ThetaGeometry& geom);

/// Smallest margin to the defining constraints of the annular set; positive
/// inside, zero on the boundary.  Used by the admissibility checks.
double theta_boundary_margin(const FourierLoop& x, const ThetaGeometry& geom);

/// Pointwise values of N((x1,x2),theta)(t) on a uniform grid of M points:
///   N_i(t) = -(a_i1 x1(t - tau/lambda) + a_i2 x2(t - tau/lambda)) (b_i + theta x_i(t)).
GridPair eval_N(const FourierLoop& x, double lambda, double theta, const LVSystem& sys, int M);

/// Correction constants of the fixed-point operator: c1 is the mean drift of
/// the integrand, c2 the mean of its antiderivative.  Quadrature on the
/// dealiased grid.
void c_constants(const FourierLoop& x, double lambda, double theta, const LVSystem& sys,
                 const ThetaGeometry& geom, BetaVariant variant, Vec2& c1, Vec2& c2);

/// The fixed-point operator: per-mode antiderivative of -lambda beta N; the
/// correction constants enforce zero mean and endpoint match, so the result
/// is a valid loop.  Solutions of F(x,lambda,1) = x are the periodic orbits.
FourierLoop eval_F(const FourierLoop& x, double lambda, double theta, const LVSystem& sys,
                   const ThetaGeometry& geom, BetaVariant variant);

/// The linearizing homotopy: -(theta sigma(lambda) + (1-theta) lambda) times
/// the antiderivative of beta N(x, 0).  Coincides with eval_F at theta = 0.
FourierLoop eval_G(const FourierLoop& x, double lambda, double theta, const LVSystem& sys,
                   const ThetaGeometry& geom, BetaVariant variant,
                   const std::function<double(double)>& sigma = {});

} // namespace lvp
