#include "lvp/dde.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "lvp/errors.hpp"

namespace lvp {

HistoryFunction HistoryFunction::sampled(double tau, std::vector<Vec2> nodes) {
    if (tau <= 0.0 || nodes.size() < 2) fail(errc::precondition, "sampled history needs tau > 0 and >= 2 nodes");
    HistoryFunction h;
    h.kind = Kind::sampled;
    h.tau = tau;
    h.nodes = std::move(nodes);
    return h;
}

Vec2 HistoryFunction::eval(double t) const {
    if (kind == Kind::constant) return values;
    // uniform nodes on [-tau, 0], local cubic (Catmull-Rom) interpolation
    const int n = static_cast<int>(nodes.size());
    const double h = tau / (n - 1);
    double s = (t + tau) / h;
    s = std::clamp(s, 0.0, double(n - 1));
    int i = std::min(static_cast<int>(std::floor(s)), n - 2);
    const double u = s - i;
    auto at = [&](int j) { return nodes[static_cast<size_t>(std::clamp(j, 0, n - 1))]; };
    Vec2 out{};
    for (int comp = 0; comp < 2; ++comp) {
        const double pm1 = at(i - 1)[comp], p0 = at(i)[comp], p1 = at(i + 1)[comp],
                     p2 = at(i + 2)[comp];
        const double m0 = 0.5 * (p1 - pm1), m1 = 0.5 * (p2 - p0);
        const double u2 = u * u, u3 = u2 * u;
        out[comp] = (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * m0 +
                    (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * m1;
    }
    return out;
}

namespace {

void hermite_weights(double th, double w[4], double dw[4]) {
    const double t2 = th * th, t3 = t2 * th;
    w[0] = 2 * t3 - 3 * t2 + 1;
    w[1] = t3 - 2 * t2 + th;
    w[2] = -2 * t3 + 3 * t2;
    w[3] = t3 - t2;
    dw[0] = 6 * t2 - 6 * th;
    dw[1] = 3 * t2 - 4 * th + 1;
    dw[2] = -6 * t2 + 6 * th;
    dw[3] = 3 * t2 - 2 * th;
}

Vec2 hermite(const Vec2& ya, const Vec2& fa, const Vec2& yb, const Vec2& fb, double h,
             double th, bool deriv) {
    double w[4], dw[4];
    hermite_weights(th, w, dw);
    Vec2 out{};
    for (int i = 0; i < 2; ++i) {
        if (!deriv)
            out[i] = w[0] * ya[i] + w[1] * h * fa[i] + w[2] * yb[i] + w[3] * h * fb[i];
        else
            out[i] = (dw[0] * ya[i] + dw[1] * h * fa[i] + dw[2] * yb[i] + dw[3] * h * fb[i]) / h;
    }
    return out;
}

using Rhs = std::function<Vec2(double t, const Vec2& y, const Vec2& yd)>;

struct Stepper {
    const Rhs& rhs;
    const HistoryFunction& history;
    double delay;
    double h;
    std::vector<double>& ts;
    std::vector<Vec2>& ys;
    std::vector<Vec2>& dys;

    Vec2 delayed_value(double t) const {
        const double td = t - delay;
        if (td <= 0.0) return history.eval(td);
        const double s = td / h;
        int i = static_cast<int>(std::floor(s + 1e-12));
        i = std::clamp(i, 0, static_cast<int>(ys.size()) - 2);
        const double th = (td - ts[static_cast<size_t>(i)]) / h;
        return hermite(ys[i], dys[i], ys[i + 1], dys[i + 1], h, th, false);
    }

    Vec2 f(double t, const Vec2& y) const { return rhs(t, y, delayed_value(t)); }

    Vec2 rk4(double t, const Vec2& y, double step) const {
        const Vec2 k1 = f(t, y);
        const Vec2 k2 = f(t + 0.5 * step, {y[0] + 0.5 * step * k1[0], y[1] + 0.5 * step * k1[1]});
        const Vec2 k3 = f(t + 0.5 * step, {y[0] + 0.5 * step * k2[0], y[1] + 0.5 * step * k2[1]});
        const Vec2 k4 = f(t + step, {y[0] + step * k3[0], y[1] + step * k3[1]});
        return {y[0] + step / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                y[1] + step / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    }
};

Trajectory run_integration(const Rhs& rhs, const HistoryFunction& history, double delay,
                           double t_end, double h_request, Frame frame,
                           const IntegrateOptions& opts) {
    if (!(h_request > 0.0) || !(t_end > 0.0)) fail(errc::precondition, "need h > 0 and t_end > 0");
    // align the step so it divides the delay exactly
    const int per_delay = std::max(1, static_cast<int>(std::ceil(delay / h_request - 1e-12)));
    const double h = delay > 0.0 ? delay / per_delay : h_request;
    const int n_steps = static_cast<int>(std::ceil(t_end / h - 1e-9));

    Trajectory traj;
    traj.t0 = 0.0;
    traj.t1 = n_steps * h;
    traj.h = h;
    traj.frame = frame;
    traj.t.reserve(static_cast<size_t>(n_steps) + 1);
    traj.y.reserve(static_cast<size_t>(n_steps) + 1);
    traj.dy.reserve(static_cast<size_t>(n_steps) + 1);

    Stepper st{rhs, history, delay, h, traj.t, traj.y, traj.dy};

    Vec2 y = history.eval(0.0);
    traj.t.push_back(0.0);
    traj.y.push_back(y);
    traj.dy.push_back(st.f(0.0, y));

    for (int j = 0; j < n_steps; ++j) {
        const double t = j * h;
        const Vec2 y_full = st.rk4(t, y, h);
        if (opts.check_local_error) {
            const Vec2 y_half = st.rk4(t + 0.5 * h, st.rk4(t, y, 0.5 * h), 0.5 * h);
            const double err = std::max(std::abs(y_full[0] - y_half[0]),
                                        std::abs(y_full[1] - y_half[1])) / 15.0;
            if (err > opts.local_error_per_unit_time * h) {
                std::ostringstream os;
                os << "local error estimate " << err / h << " per unit time at t = " << t
                   << " exceeds " << opts.local_error_per_unit_time;
                fail(errc::step_too_large, os.str());
            }
        }
        y = y_full;
        if (std::abs(y[0]) > opts.blow_up || std::abs(y[1]) > opts.blow_up)
            fail(errc::blow_up, "state exceeded the blow-up threshold");
        traj.t.push_back((j + 1) * h);
        traj.y.push_back(y);
        traj.dy.push_back(st.f((j + 1) * h, y));
    }
    return traj;
}

} // namespace

Vec2 Trajectory::eval(double time) const {
    const double s = (time - t0) / h;
    int i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, static_cast<int>(y.size()) - 2);
    const double th = (time - t[static_cast<size_t>(i)]) / h;
    return hermite(y[i], dy[i], y[i + 1], dy[i + 1], h, th, false);
}

Vec2 Trajectory::eval_deriv(double time) const {
    const double s = (time - t0) / h;
    int i = static_cast<int>(std::floor(s));
    i = std::clamp(i, 0, static_cast<int>(y.size()) - 2);
    const double th = (time - t[static_cast<size_t>(i)]) / h;
    return hermite(y[i], dy[i], y[i + 1], dy[i + 1], h, th, true);
}

Trajectory integrate(const LVSystem& sys, const HistoryFunction& history, double t_end,
                     double h, Frame frame, double lambda, const IntegrateOptions& opts) {
    const Mat2& A = sys.A;
    const Vec2 b = sys.b;
    const Vec2 r = sys.r;
    Rhs rhs;
    double delay = sys.tau;
    switch (frame) {
    case Frame::original_u: {
        const Vec2 start = history.eval(0.0);
        if (!(start[0] > 0.0 && start[1] > 0.0))
            fail(errc::precondition, "original-frame histories must end with positive populations");
        rhs = [A, r](double, const Vec2& y, const Vec2& yd) -> Vec2 {
            return {y[0] * (r[0] - A(0, 0) * yd[0] - A(0, 1) * yd[1]),
                    y[1] * (r[1] - A(1, 0) * yd[0] - A(1, 1) * yd[1])};
        };
        break;
    }
    case Frame::shifted_x:
        rhs = [A, b](double, const Vec2& y, const Vec2& yd) -> Vec2 {
            return {-(A(0, 0) * yd[0] + A(0, 1) * yd[1]) * (b[0] + y[0]),
                    -(A(1, 0) * yd[0] + A(1, 1) * yd[1]) * (b[1] + y[1])};
        };
        break;
    case Frame::rescaled:
        if (!(lambda > 0.0)) fail(errc::precondition, "rescaled frame needs lambda > 0");
        delay = sys.tau / lambda;
        rhs = [A, b, lambda](double, const Vec2& y, const Vec2& yd) -> Vec2 {
            return {-lambda * (A(0, 0) * yd[0] + A(0, 1) * yd[1]) * (b[0] + y[0]),
                    -lambda * (A(1, 0) * yd[0] + A(1, 1) * yd[1]) * (b[1] + y[1])};
        };
        break;
    }
    return run_integration(rhs, history, delay, t_end, h, frame, opts);
}

Trajectory integrate_logistic(double alpha, double tau, double u0, double t_end, double h,
                              const IntegrateOptions& opts) {
    Rhs rhs = [alpha](double, const Vec2& y, const Vec2& yd) -> Vec2 {
        return {alpha * y[0] * (1.0 - yd[0]), 0.0};
    };
    HistoryFunction hist = HistoryFunction::constant({u0, 0.0});
    return run_integration(rhs, hist, tau, t_end, h, Frame::original_u, opts);
}

std::vector<double> return_time(const Trajectory& traj, int component, double level,
                                CrossDir direction, double t_start) {
    std::vector<double> out;
    const int n = static_cast<int>(traj.y.size());
    for (int i = 0; i + 1 < n; ++i) {
        const double ta = traj.t[static_cast<size_t>(i)];
        const double tb = traj.t[static_cast<size_t>(i) + 1];
        if (tb <= t_start) continue;
        // subdivide: a cubic may cross more than once per step
        const int sub = 4;
        double prev_t = ta;
        double prev_v = hermite(traj.y[i], traj.dy[i], traj.y[i + 1], traj.dy[i + 1], traj.h,
                                0.0, false)[component] - level;
        for (int q = 1; q <= sub; ++q) {
            const double tq = ta + (tb - ta) * q / sub;
            const double vq = hermite(traj.y[i], traj.dy[i], traj.y[i + 1], traj.dy[i + 1],
                                      traj.h, double(q) / sub, false)[component] - level;
            if (prev_v == 0.0 || prev_v * vq < 0.0) {
                double lo = prev_t, hi = tq;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double vm = traj.eval(mid)[component] - level;
                    if ((vm < 0) == (prev_v < 0))
                        lo = mid;
                    else
                        hi = mid;
                    if (hi - lo < 1e-10) break;
                }
                const double root = 0.5 * (lo + hi);
                const double slope = traj.eval_deriv(root)[component];
                const bool dir_ok = direction == CrossDir::up ? slope > 0.0 : slope < 0.0;
                if (dir_ok && root > t_start && (out.empty() || root - out.back() > 1e-8))
                    out.push_back(root);
            }
            prev_t = tq;
            prev_v = vq;
        }
    }
    return out;
}

PeriodEstimate estimate_period(const Trajectory& traj, double transient_skip) {
    if (traj.t1 - traj.t0 <= transient_skip)
        fail(errc::precondition, "trajectory shorter than the transient skip");
    const double t_start = traj.t0 + transient_skip;
    // mean of component 0 after the transient
    double mean = 0.0;
    int count = 0;
    for (size_t i = 0; i < traj.y.size(); ++i) {
        if (traj.t[i] >= t_start) {
            mean += traj.y[i][0];
            ++count;
        }
    }
    if (count == 0) return {};
    mean /= count;

    const auto crossings = return_time(traj, 0, mean, CrossDir::up, t_start);
    if (crossings.size() < 3) return {};
    std::vector<double> gaps;
    gaps.reserve(crossings.size() - 1);
    for (size_t i = 1; i < crossings.size(); ++i) gaps.push_back(crossings[i] - crossings[i - 1]);
    std::sort(gaps.begin(), gaps.end());
    auto quantile = [&](double q) {
        const double pos = q * (gaps.size() - 1);
        const size_t lo = static_cast<size_t>(std::floor(pos));
        const size_t hi = std::min(lo + 1, gaps.size() - 1);
        const double w = pos - lo;
        return (1.0 - w) * gaps[lo] + w * gaps[hi];
    };
    PeriodEstimate est;
    est.period = quantile(0.5);
    const double iqr = quantile(0.75) - quantile(0.25);
    est.confidence = std::clamp(1.0 - iqr / est.period, 0.0, 1.0);
    est.ok = est.confidence >= 0.9;
    return est;
}

} // namespace lvp
