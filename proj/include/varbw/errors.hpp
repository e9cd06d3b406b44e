#pragma once

#include <stdexcept>
#include <string>

namespace varbw {

/// Failure categories surfaced by the library. Input-class errors map to CLI
/// exit code 2, numerical-class errors to exit code 1.
enum class errc {
  non_increasing_breakpoints,
  non_positive_value,
  length_mismatch,
  index_out_of_range,
  non_positive_spectral_parameter,
  non_positive_lambda,
  vanishing_denominator,
  grid_cutoff_mismatch,
  out_of_band,
  near_singular_system,
  window_too_narrow,
  degenerate_grid,
  negative_magnitude,
  asymmetric_window,
  no_clear_winner,
  non_positive_scale,
  toy_requires_single_jump,
  parse_error,
};

const char* errc_name(errc c);

/// True for errors caused by malformed or inconsistent inputs, false for
/// errors diagnosed during numerical evaluation.
bool is_input_error(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace varbw
