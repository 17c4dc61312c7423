#pragma once

#include <stdexcept>
#include <string>

namespace sqdyn {

enum class errc {
    invalid_argument,
    unsupported_symbol,
    degree_too_high,
    step_failure,
    nonfinite_state,
    degenerate,
    no_convergence,
    branch_ambiguity,
    unbound,
    below_minimum,
    no_bracket,
    grid_too_coarse,
    not_confining,
    quadrature_failure,
    leakage,
    no_root_trajectory,
    degenerate_stationary_point,
    zero_crossing,
    stationary_point,
    internal
};

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

} // namespace sqdyn
