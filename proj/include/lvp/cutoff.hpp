#pragma once

namespace lvp {

/// Smooth monotone transition profile: value 1 for t <= lo, alpha0 for
/// t >= hi, cubic Hermite ramp in between (zero slope at both ends, strictly
/// decreasing inside).  Used as the radial cutoff applied to the squared norm.
struct CutoffProfile {
    double alpha0 = 0.05;
    double lo = 0.0;
    double hi = 1.0;

    double value(double t) const;
    double slope(double t) const; // derivative d/dt, <= 0, < 0 strictly inside the band

    /// Inverse on the transition band: the unique t with value(t) = level,
    /// bisected to 1e-12 relative.  Requires alpha0 < level < 1.
    double inverse(double level) const;
};

} // namespace lvp
