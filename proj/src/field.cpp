#include "lvp/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lvp/errors.hpp"

namespace lvp {

namespace {
constexpr double pi = std::numbers::pi;

double checked_exp(double e) {
    if (e > 700.0) {
        std::ostringstream os;
        os << "a priori bound exponent " << e << " overflows double range";
        fail(errc::bound_overflow, os.str());
    }
    return std::exp(e);
}

int field_grid(int K) { return std::max(8 * K, 33); }
} // namespace

AprioriBounds apriori_bounds(const LVSystem& sys, double lambda_hi) {
    const double w = 2.0 * pi * lambda_hi;
    const auto& A = sys.A;
    const auto& b = sys.b;
    AprioriBounds r;
    r.d3 = b[0] * (checked_exp(w * (A(0, 0) * b[0] + A(0, 1) * b[1])) - 1.0);
    r.d4 = b[1] * (checked_exp(w * (A(1, 0) * b[0] + A(1, 1) * b[1])) - 1.0);
    // exact arithmetic keeps d1 < b1 strictly; the exponential can underflow
    // and saturate the difference, so nudge back below the equilibrium
    r.d1 = std::min(b[0] * (1.0 - std::exp(-w * (A(0, 0) * r.d3 + A(0, 1) * r.d4))),
                    b[0] * (1.0 - 1e-12));
    r.d2 = std::min(b[1] * (1.0 - std::exp(-w * (A(1, 0) * r.d3 + A(1, 1) * r.d4))),
                    b[1] * (1.0 - 1e-12));
    const double m0a = lambda_hi * (A(0, 0) * r.d3 + A(0, 1) * r.d4) * (b[0] + r.d3);
    const double m0b = lambda_hi * (A(1, 0) * r.d3 + A(1, 1) * r.d4) * (b[1] + r.d4);
    r.m0 = 1.1 * std::max(m0a, m0b);
    return r;
}

ThetaGeometry make_geometry(const LVSystem& sys, double lambda_hi, double alpha0,
                            double radius_r, double radius_R, double m1_override,
                            double smallest_candidate_norm) {
    if (!(alpha0 > 0.0 && alpha0 < 1.0)) fail(errc::precondition, "alpha0 must lie in (0,1)");
    if (!(radius_r > 0.0 && radius_r < radius_R)) fail(errc::precondition, "need 0 < radius_r < radius_R");
    ThetaGeometry g;
    g.bounds = apriori_bounds(sys, lambda_hi);
    g.b = sys.b;
    g.profile.alpha0 = alpha0;
    g.profile.lo = std::sqrt(radius_r);
    g.profile.hi = std::sqrt(radius_R);
    if (m1_override > 0.0)
        g.m1 = m1_override;
    else if (smallest_candidate_norm > 0.0)
        g.m1 = 0.5 * smallest_candidate_norm;
    else
        g.m1 = 1e-2;
    // squared gap between the inner and outer box; exponents this large can
    // underflow the inner gap to zero, clamp it away from the ramp's divisor
    const double gap1 = 0.5 * (sys.b[0] - g.bounds.d1);
    const double gap2 = 0.5 * (sys.b[1] - g.bounds.d2);
    g.delta0 = std::min({std::max(gap1 * gap1, 1e-12), std::max(gap2 * gap2, 1e-12),
                         g.bounds.d3 * g.bounds.d3, g.bounds.d4 * g.bounds.d4,
                         0.25 * g.m1 * g.m1});
    return g;
}

namespace {

// signed margin to the outer constraints (box and kinetic energy): positive
// strictly inside the bounded region, negative outside
double outer_margin(const FourierLoop& x, const ThetaGeometry& geom) {
    const auto& d = geom.bounds;
    const double lo_lim[2] = {-0.5 * (geom.b[0] + d.d1), -0.5 * (geom.b[1] + d.d2)};
    const double hi_lim[2] = {2.0 * d.d3, 2.0 * d.d4};
    double margin = std::numeric_limits<double>::infinity();
    const int M = std::max(field_grid(x.K), 256);
    for (int i = 0; i < 2; ++i) {
        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double energy = 0.0;
        for (int j = 0; j < M; ++j) {
            const double t = 2.0 * pi * j / M;
            const double v = x.eval(i, t);
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
            const double dv = x.eval_deriv(i, t);
            energy += dv * dv;
        }
        energy *= 2.0 * pi / M;
        margin = std::min(margin, xmin - lo_lim[i]);
        margin = std::min(margin, hi_lim[i] - xmax);
        margin = std::min(margin, std::sqrt(2.0 * pi) * d.m0 - std::sqrt(energy));
    }
    return margin;
}

// signed margin to the excluded ball: positive outside it
double hole_margin(const FourierLoop& x, const ThetaGeometry& geom) {
    const double comp_norm =
        std::sqrt(std::max(x.norm2_component(0), x.norm2_component(1)));
    return comp_norm - 0.5 * geom.m1;
}

} // namespace

double theta_boundary_margin(const FourierLoop& x, const ThetaGeometry& geom) {
    return std::min(outer_margin(x, geom), hole_margin(x, geom));
}

double beta(const FourierLoop& x, const ThetaGeometry& geom, BetaVariant variant) {
    switch (variant) {
    case BetaVariant::one:
        return 1.0;
    case BetaVariant::radial:
        return geom.profile.value(x.norm2());
    case BetaVariant::distance: {
        // alpha0 plateau everywhere outside the bounded region; inside, ramp
        // on the squared distance to the nearest constraint face (the hole
        // counts by unsigned distance, so the value is 1 deep inside it)
        const double outer = outer_margin(x, geom);
        if (outer <= 0.0) return geom.profile.alpha0;
        const double m = std::min(outer, std::abs(hole_margin(x, geom)));
        const double u = std::min(m * m / geom.delta0, 1.0);
        const double ramp = u * u * (3.0 - 2.0 * u); // alpha0 -> 1, C^1
        return geom.profile.alpha0 + (1.0 - geom.profile.alpha0) * ramp;
    }
    }
    return 1.0;
}

double beta_radial_slope(const FourierLoop& x, const ThetaGeometry& geom) {
    return geom.profile.slope(x.norm2());
}

GridPair eval_N(const FourierLoop& x, double lambda, double theta, const LVSystem& sys, int M) {
    if (!(lambda > 0.0)) fail(errc::precondition, "lambda must be positive");
    const FourierLoop xd = delayed(x, sys.tau / lambda);
    const GridPair gx = sample(x, M);
    const GridPair gd = sample(xd, M);
    GridPair out;
    out.M = M;
    for (int i = 0; i < 2; ++i) {
        out.v[i].resize(static_cast<size_t>(M));
        for (int j = 0; j < M; ++j) {
            const double drive = sys.A(i, 0) * gd.v[0][j] + sys.A(i, 1) * gd.v[1][j];
            out.v[i][j] = -drive * (sys.b[i] + theta * gx.v[i][j]);
        }
    }
    return out;
}

// The integrand of the fixed-point operator is lambda beta N; its sign is
// fixed so that fixed points solve the delayed system itself (N already
// carries the leading minus).
void c_constants(const FourierLoop& x, double lambda, double theta, const LVSystem& sys,
                 const ThetaGeometry& geom, BetaVariant variant, Vec2& c1, Vec2& c2) {
    const int M = field_grid(x.K);
    const double be = beta(x, geom, variant);
    GridPair n = eval_N(x, lambda, theta, sys, M);
    for (int i = 0; i < 2; ++i)
        for (auto& v : n.v[i]) v *= lambda * be;
    // c1 is the mean drift of the integrand; c2 the mean of its antiderivative
    grid_mean(n, c1.data());
    const FourierLoop g = project(n, 2 * x.K);
    for (int i = 0; i < 2; ++i) {
        double acc = 0.0;
        for (int k = 1; k <= g.K; ++k) acc += g.s[i][k - 1] / k;
        c2[i] = acc;
    }
}

FourierLoop eval_F(const FourierLoop& x, double lambda, double theta, const LVSystem& sys,
                   const ThetaGeometry& geom, BetaVariant variant) {
    const int M = field_grid(x.K);
    const double be = beta(x, geom, variant);
    GridPair n = eval_N(x, lambda, theta, sys, M);
    for (int i = 0; i < 2; ++i)
        for (auto& v : n.v[i]) v *= lambda * be;
    FourierLoop out = integrate_zero_mean(project(n, x.K));
    out.lambda_tag = lambda;
    return out;
}

FourierLoop eval_G(const FourierLoop& x, double lambda, double theta, const LVSystem& sys,
                   const ThetaGeometry& geom, BetaVariant variant,
                   const std::function<double(double)>& sigma) {
    const int M = field_grid(x.K);
    const double be = beta(x, geom, variant);
    const double sig = sigma ? sigma(lambda) : lambda;
    const double factor = theta * sig + (1.0 - theta) * lambda;
    GridPair n = eval_N(x, lambda, 0.0, sys, M);
    for (int i = 0; i < 2; ++i)
        for (auto& v : n.v[i]) v *= factor * be;
    FourierLoop out = integrate_zero_mean(project(n, x.K));
    out.lambda_tag = lambda;
    return out;
}

} // namespace lvp
