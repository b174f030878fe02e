#pragma once

#include <cstddef>
#include <vector>

namespace lvp {

/// A zero-mean 2pi-periodic pair of trajectories stored as truncated Fourier
/// coefficients; modes k = 1..K, no constant term.  Component i is
///   x_i(t) = sum_k cos_k[i][k-1] cos(kt) + sin_k[i][k-1] sin(kt).
struct FourierLoop {
    int K = 0;
    std::vector<double> c[2]; // cosine coefficients, size K each
    std::vector<double> s[2]; // sine coefficients, size K each
    double lambda_tag = 0.0;  // associated lambda when representing a point of E x R+

    FourierLoop() = default;
    explicit FourierLoop(int K_) : K(K_) {
        for (int i = 0; i < 2; ++i) {
            c[i].assign(static_cast<size_t>(K), 0.0);
            s[i].assign(static_cast<size_t>(K), 0.0);
        }
    }

    double eval(int comp, double t) const;
    double eval_deriv(int comp, double t) const;

    /// squared norm of one component, int x'^2 + x^2 = sum_k pi (1+k^2)(c_k^2+s_k^2)
    double norm2_component(int comp) const;
    /// squared norm of the pair (the product-space norm)
    double norm2() const { return norm2_component(0) + norm2_component(1); }

    /// sup over a dense grid of |x_i(t)|
    double sup_norm(int comp, int grid = 512) const;

    FourierLoop& operator+=(const FourierLoop& o);
    FourierLoop& operator-=(const FourierLoop& o);
    FourierLoop& operator*=(double a);
};

FourierLoop operator-(FourierLoop a, const FourierLoop& b);
FourierLoop operator+(FourierLoop a, const FourierLoop& b);
FourierLoop operator*(double a, FourierLoop x);

/// Phase shift: returns t -> x(t + phi).  The group action on E; an isometry.
FourierLoop act(const FourierLoop& x, double phi);

/// Delayed loop t -> x(t - d) (same as act(x, -d)).
FourierLoop delayed(const FourierLoop& x, double d);

/// Per-mode differentiation t -> x'(t).
FourierLoop derivative(const FourierLoop& x);

/// Per-mode antiderivative with the mean projected out: the unique member of E
/// whose derivative is the zero-mean part of x.
FourierLoop integrate_zero_mean(const FourierLoop& x);

/// L2 inner product over [0,2pi] of the pairs: sum_i int x_i y_i.
double inner_l2(const FourierLoop& x, const FourierLoop& y);

/// Inner product of the E-norm: sum_i int x_i' y_i' + x_i y_i.
double inner_e(const FourierLoop& x, const FourierLoop& y);

/// Samples of a loop and grid projection.  Grids are uniform, t_j = 2pi j / M.
struct GridPair {
    int M = 0;
    std::vector<double> v[2];
};

GridPair sample(const FourierLoop& x, int M);

/// Projects grid values onto modes 1..K per component (rectangle rule, exact
/// for integrands band-limited below M-K).  The mean (mode 0) is dropped.
FourierLoop project(const GridPair& g, int K);

/// Mean of grid values per component.
void grid_mean(const GridPair& g, double out[2]);

} // namespace lvp
