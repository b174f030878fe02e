#include "lvp/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lvp/errors.hpp"

namespace lvp {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_number(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        if (!std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail(errc::config_error, "config: bad numeric value for '" + key + "': " + v);
    }
}

} // namespace

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::config_error, "config: cannot open " + path);

    RunConfig cfg;
    std::string section;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(errc::config_error, "config: malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(errc::config_error, "config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string full = section + "." + key;
        seen.insert(full);

        if (full == "system.a11") cfg.A(0, 0) = to_number(full, value);
        else if (full == "system.a12") cfg.A(0, 1) = to_number(full, value);
        else if (full == "system.a21") cfg.A(1, 0) = to_number(full, value);
        else if (full == "system.a22") cfg.A(1, 1) = to_number(full, value);
        else if (full == "system.r1") cfg.r[0] = to_number(full, value);
        else if (full == "system.r2") cfg.r[1] = to_number(full, value);
        else if (full == "system.tau") cfg.tau = to_number(full, value);
        else if (full == "solver.K") cfg.K = static_cast<int>(to_number(full, value));
        else if (full == "solver.M") cfg.M = static_cast<int>(to_number(full, value));
        else if (full == "solver.newton_tol") cfg.newton_tol = to_number(full, value);
        else if (full == "solver.max_iters") cfg.max_iters = static_cast<int>(to_number(full, value));
        else if (full == "solver.rk4_step") cfg.rk4_step = to_number(full, value);
        else if (full == "solver.t_end") cfg.t_end = to_number(full, value);
        else if (full == "solver.transient_skip") cfg.transient_skip = to_number(full, value);
        else if (full == "geometry.alpha0") cfg.alpha0 = to_number(full, value);
        else if (full == "geometry.radius_r") cfg.radius_r = to_number(full, value);
        else if (full == "geometry.radius_R") cfg.radius_R = to_number(full, value);
        else if (full == "geometry.m1_override") cfg.m1_override = to_number(full, value);
        else if (full == "output.directory") cfg.directory = value;
        else if (full == "output.formats") cfg.formats = value;
        else fail(errc::config_error, "config: unknown key '" + full + "' at line " + std::to_string(lineno));
    }

    const char* required[] = {"system.a11", "system.a12", "system.a21", "system.a22",
                              "system.r1", "system.r2", "system.tau"};
    for (const char* k : required)
        if (!seen.count(k)) fail(errc::config_error, std::string("config: missing key '") + k + "'");

    if (cfg.tau < 0.0) fail(errc::config_error, "config: tau must be >= 0");
    if (cfg.K < 8) fail(errc::config_error, "config: K must be >= 8");
    if (cfg.M != 0 && cfg.M < 4 * cfg.K + 1) fail(errc::config_error, "config: M must be >= 4K+1");
    return cfg;
}

} // namespace lvp
