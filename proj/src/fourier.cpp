#include "lvp/fourier.hpp"

#include <cmath>
#include <numbers>

namespace lvp {

namespace {
constexpr double pi = std::numbers::pi;
}

double FourierLoop::eval(int comp, double t) const {
    double v = 0.0;
    for (int k = 1; k <= K; ++k)
        v += c[comp][k - 1] * std::cos(k * t) + s[comp][k - 1] * std::sin(k * t);
    return v;
}

double FourierLoop::eval_deriv(int comp, double t) const {
    double v = 0.0;
    for (int k = 1; k <= K; ++k)
        v += k * (s[comp][k - 1] * std::cos(k * t) - c[comp][k - 1] * std::sin(k * t));
    return v;
}

double FourierLoop::norm2_component(int comp) const {
    double v = 0.0;
    for (int k = 1; k <= K; ++k) {
        const double ck = c[comp][k - 1], sk = s[comp][k - 1];
        v += pi * (1.0 + double(k) * k) * (ck * ck + sk * sk);
    }
    return v;
}

double FourierLoop::sup_norm(int comp, int grid) const {
    double m = 0.0;
    for (int j = 0; j < grid; ++j) m = std::max(m, std::abs(eval(comp, 2.0 * pi * j / grid)));
    return m;
}

FourierLoop& FourierLoop::operator+=(const FourierLoop& o) {
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < K; ++k) {
            c[i][k] += o.c[i][k];
            s[i][k] += o.s[i][k];
        }
    return *this;
}

FourierLoop& FourierLoop::operator-=(const FourierLoop& o) {
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < K; ++k) {
            c[i][k] -= o.c[i][k];
            s[i][k] -= o.s[i][k];
        }
    return *this;
}

FourierLoop& FourierLoop::operator*=(double a) {
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < K; ++k) {
            c[i][k] *= a;
            s[i][k] *= a;
        }
    return *this;
}

FourierLoop operator-(FourierLoop a, const FourierLoop& b) { return a -= b; }
FourierLoop operator+(FourierLoop a, const FourierLoop& b) { return a += b; }
FourierLoop operator*(double a, FourierLoop x) { return x *= a; }

FourierLoop act(const FourierLoop& x, double phi) {
    FourierLoop y(x.K);
    y.lambda_tag = x.lambda_tag;
    for (int i = 0; i < 2; ++i)
        for (int k = 1; k <= x.K; ++k) {
            const double ck = x.c[i][k - 1], sk = x.s[i][k - 1];
            const double cp = std::cos(k * phi), sp = std::sin(k * phi);
            y.c[i][k - 1] = ck * cp + sk * sp;
            y.s[i][k - 1] = -ck * sp + sk * cp;
        }
    return y;
}

FourierLoop delayed(const FourierLoop& x, double d) { return act(x, -d); }

FourierLoop derivative(const FourierLoop& x) {
    FourierLoop y(x.K);
    for (int i = 0; i < 2; ++i)
        for (int k = 1; k <= x.K; ++k) {
            y.c[i][k - 1] = k * x.s[i][k - 1];
            y.s[i][k - 1] = -k * x.c[i][k - 1];
        }
    return y;
}

FourierLoop integrate_zero_mean(const FourierLoop& x) {
    FourierLoop y(x.K);
    for (int i = 0; i < 2; ++i)
        for (int k = 1; k <= x.K; ++k) {
            y.c[i][k - 1] = -x.s[i][k - 1] / k;
            y.s[i][k - 1] = x.c[i][k - 1] / k;
        }
    return y;
}

double inner_l2(const FourierLoop& x, const FourierLoop& y) {
    double v = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < x.K; ++k) v += pi * (x.c[i][k] * y.c[i][k] + x.s[i][k] * y.s[i][k]);
    return v;
}

double inner_e(const FourierLoop& x, const FourierLoop& y) {
    double v = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int k = 1; k <= x.K; ++k)
            v += pi * (1.0 + double(k) * k) *
                 (x.c[i][k - 1] * y.c[i][k - 1] + x.s[i][k - 1] * y.s[i][k - 1]);
    return v;
}

GridPair sample(const FourierLoop& x, int M) {
    GridPair g;
    g.M = M;
    for (int i = 0; i < 2; ++i) {
        g.v[i].resize(static_cast<size_t>(M));
        for (int j = 0; j < M; ++j) g.v[i][j] = x.eval(i, 2.0 * pi * j / M);
    }
    return g;
}

FourierLoop project(const GridPair& g, int K) {
    FourierLoop x(K);
    const int M = g.M;
    for (int i = 0; i < 2; ++i)
        for (int k = 1; k <= K; ++k) {
            double ck = 0.0, sk = 0.0;
            for (int j = 0; j < M; ++j) {
                const double t = 2.0 * pi * j / M;
                ck += g.v[i][j] * std::cos(k * t);
                sk += g.v[i][j] * std::sin(k * t);
            }
            x.c[i][k - 1] = 2.0 * ck / M;
            x.s[i][k - 1] = 2.0 * sk / M;
        }
    return x;
}

void grid_mean(const GridPair& g, double out[2]) {
    for (int i = 0; i < 2; ++i) {
        double m = 0.0;
        for (double v : g.v[i]) m += v;
        out[i] = m / g.M;
    }
}

} // namespace lvp
