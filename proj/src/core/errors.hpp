#pragma once

#include <stdexcept>
#include <string>

namespace pfopt {

// Error taxonomy shared by the C++ core and the C API layer. Numeric values
// are part of the shared-library ABI (mirrored in include/pfopt.h); append
// only.
enum class Errc : int {
  ok = 0,
  io_error = 1,
  malformed_row = 2,
  non_positive_price = 3,
  duplicate_date = 4,
  empty_intersection = 5,
  length_mismatch = 6,
  no_coverage = 7,
  zero_assets = 8,
  dimension_mismatch = 9,
  window_too_short = 10,
  singular_covariance = 11,
  degenerate_frontier = 12,
  no_tangency = 13,
  solver_failure = 14,
  infeasible = 15,
  unbounded = 16,
  zero_volatility = 17,
  empty_series = 18,
  zero_drawdown = 19,
  too_few_observations = 20,
  zero_tail_risk = 21,
  empty_tail = 22,
  no_downside = 23,
  degenerate_benchmark = 24,
  insufficient_tail = 25,
  non_positive_tail_value = 26,
  no_convergence = 27,
  degenerate_x = 28,
  non_pd_projection = 29,
  invalid_seed_state = 30,
  date_axis_mismatch = 31,
  config_error = 32,
  invalid_argument = 33,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) raise(code, msg);
}

}  // namespace pfopt
