#pragma once

#include <stdexcept>
#include <string>

namespace lvp {

enum class errc {
    singular_matrix,
    degenerate_eigenvalues,
    empty_phi,
    level_out_of_range,
    bound_overflow,
    step_too_large,
    blow_up,
    no_convergence,
    sign_unstable,
    degenerate_orbit,
    hypothesis_failed,
    no_window,
    config_error,
    precondition,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace lvp
