#pragma once

#include <vector>

#include "lvp/model.hpp"

namespace lvp {

/// History on [-tau, 0]: either a constant pair or sampled nodes with cubic
/// interpolation.
struct HistoryFunction {
    enum class Kind { constant, sampled };
    Kind kind = Kind::constant;
    Vec2 values{}; // constant case
    // sampled case: uniform nodes on [-tau, 0]
    double tau = 0.0;
    std::vector<Vec2> nodes;

    static HistoryFunction constant(const Vec2& v) {
        HistoryFunction h;
        h.kind = Kind::constant;
        h.values = v;
        return h;
    }
    static HistoryFunction sampled(double tau, std::vector<Vec2> nodes);

    Vec2 eval(double t) const; // t in [-tau, 0]
};

enum class Frame { original_u, shifted_x, rescaled };

/// Dense method-of-steps trajectory: uniform nodes carrying state and
/// derivative, cubic-Hermite interpolable between nodes.
struct Trajectory {
    double t0 = 0.0, t1 = 0.0;
    double h = 0.0;
    Frame frame = Frame::original_u;
    std::vector<double> t;
    std::vector<Vec2> y;
    std::vector<Vec2> dy;

    Vec2 eval(double time) const;
    Vec2 eval_deriv(double time) const;
};

struct IntegrateOptions {
    double local_error_per_unit_time = 1e-6;
    double blow_up = 1e12;
    bool check_local_error = true;
};

/// Classical one-step RK4 over intervals of length tau, delayed values read
/// from the dense history of the previous interval.  h is adjusted down to
/// divide tau exactly.  Throws errc::step_too_large / errc::blow_up.
Trajectory integrate(const LVSystem& sys, const HistoryFunction& history, double t_end,
                     double h, Frame frame, double lambda = 1.0,
                     const IntegrateOptions& opts = {});

/// Scalar delay logistic u' = alpha u (1 - u(t - tau)); the second component
/// of the trajectory is identically zero.
Trajectory integrate_logistic(double alpha, double tau, double u0, double t_end, double h,
                              const IntegrateOptions& opts = {});

/// All times in (t_start, t1] where the component crosses the level in the
/// given direction, refined on the Hermite interpolant to 1e-10.
enum class CrossDir { up, down };
std::vector<double> return_time(const Trajectory& traj, int component, double level,
                                CrossDir direction, double t_start);

struct PeriodEstimate {
    bool ok = false; // false: aperiodic (confidence below 0.9 or no crossings)
    double period = 0.0;
    double confidence = 0.0;
};

/// Median spacing of upward mean-crossings of component 0 after the transient.
PeriodEstimate estimate_period(const Trajectory& traj, double transient_skip);

} // namespace lvp
