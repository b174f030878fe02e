#include "lvp/cutoff.hpp"

#include <cmath>

#include "lvp/errors.hpp"

namespace lvp {

double CutoffProfile::value(double t) const {
    if (t <= lo) return 1.0;
    if (t >= hi) return alpha0;
    const double u = (t - lo) / (hi - lo);
    const double ramp = (1.0 - u) * (1.0 - u) * (1.0 + 2.0 * u); // 1 -> 0, C^1
    return alpha0 + (1.0 - alpha0) * ramp;
}

double CutoffProfile::slope(double t) const {
    if (t <= lo || t >= hi) return 0.0;
    const double u = (t - lo) / (hi - lo);
    return (1.0 - alpha0) * (-6.0 * u * (1.0 - u)) / (hi - lo);
}

double CutoffProfile::inverse(double level) const {
    if (!(level > alpha0 && level < 1.0))
        fail(errc::level_out_of_range, "cutoff level must lie strictly inside (alpha0, 1)");
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (value(mid) > level)
            a = mid;
        else
            b = mid;
        if ((b - a) <= 1e-12 * std::max(1.0, std::abs(b))) break;
    }
    return 0.5 * (a + b);
}

} // namespace lvp
