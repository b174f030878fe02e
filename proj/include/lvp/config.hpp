#pragma once

#include <string>

#include "lvp/mat2.hpp"

namespace lvp {

/// Flat `key = value` configuration with `[section]` headers and `#` comments.
struct RunConfig {
    // [system]
    Mat2 A{{1.0, 0.0, 0.0, 1.0}};
    Vec2 r{1.0, 1.0};
    double tau = 1.0;

    // [solver]
    int K = 32;
    int M = 0; // 0 -> 4K+1
    double newton_tol = 1e-10;
    int max_iters = 50;
    double rk4_step = 0.0; // 0 -> tau/512
    double t_end = 300.0;
    double transient_skip = 0.0; // 0 -> 50*tau

    // [geometry]
    double alpha0 = 0.05;
    double radius_r = 0.01;
    double radius_R = 100.0;
    double m1_override = 0.0;

    // [output]
    std::string directory = ".";
    std::string formats = "csv";

    double step() const { return rk4_step > 0.0 ? rk4_step : tau / 512.0; }
    double skip() const { return transient_skip > 0.0 ? transient_skip : 50.0 * tau; }
};

/// Parses a config file.  Throws errc::config_error on unknown keys, malformed
/// lines, non-finite numbers, tau < 0 or K < 8; the [system] block is
/// mandatory.
RunConfig parse_config(const std::string& path);

} // namespace lvp
