#pragma once

#include <array>
#include <cmath>

namespace lvp {

using Vec2 = std::array<double, 2>;

struct Mat2 {
    // row-major: m[0]=a11 m[1]=a12 m[2]=a21 m[3]=a22
    std::array<double, 4> m{};

    double operator()(int i, int j) const { return m[2 * i + j]; }
    double& operator()(int i, int j) { return m[2 * i + j]; }

    double det() const { return m[0] * m[3] - m[1] * m[2]; }
    double trace() const { return m[0] + m[3]; }

    Vec2 apply(const Vec2& v) const {
        return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
    }

    Mat2 mul(const Mat2& o) const {
        Mat2 r;
        r.m = {m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3],
               m[2] * o.m[0] + m[3] * o.m[2], m[2] * o.m[1] + m[3] * o.m[3]};
        return r;
    }

    Mat2 transpose() const { return Mat2{{m[0], m[2], m[1], m[3]}}; }

    // Frobenius norm
    double norm() const {
        return std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2] + m[3] * m[3]);
    }

    double max_abs() const {
        double v = 0.0;
        for (double x : m) v = std::max(v, std::abs(x));
        return v;
    }
};

inline Mat2 inverse(const Mat2& a) {
    const double d = a.det();
    return Mat2{{a.m[3] / d, -a.m[1] / d, -a.m[2] / d, a.m[0] / d}};
}

// Eigenvalues of the symmetric part (A+A^T)/2, ascending.
inline Vec2 sym_part_eigs(const Mat2& a) {
    const double p = a.m[0], q = 0.5 * (a.m[1] + a.m[2]), r = a.m[3];
    const double mean = 0.5 * (p + r);
    const double rad = std::sqrt(0.25 * (p - r) * (p - r) + q * q);
    return {mean - rad, mean + rad};
}

} // namespace lvp
