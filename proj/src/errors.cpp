#include "varbw/errors.hpp"

namespace varbw {

const char* errc_name(errc c) {
  switch (c) {
    case errc::non_increasing_breakpoints: return "NonIncreasingBreakpoints";
    case errc::non_positive_value: return "NonPositiveValue";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::non_positive_spectral_parameter: return "NonPositiveSpectralParameter";
    case errc::non_positive_lambda: return "NonPositiveLambda";
    case errc::vanishing_denominator: return "VanishingDenominator";
    case errc::grid_cutoff_mismatch: return "GridCutoffMismatch";
    case errc::out_of_band: return "OutOfBand";
    case errc::near_singular_system: return "NearSingularSystem";
    case errc::window_too_narrow: return "WindowTooNarrow";
    case errc::degenerate_grid: return "DegenerateGrid";
    case errc::negative_magnitude: return "NegativeMagnitude";
    case errc::asymmetric_window: return "AsymmetricWindow";
    case errc::no_clear_winner: return "NoClearWinner";
    case errc::non_positive_scale: return "NonPositiveScale";
    case errc::toy_requires_single_jump: return "ToyRequiresSingleJump";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

bool is_input_error(errc c) {
  switch (c) {
    case errc::non_increasing_breakpoints:
    case errc::non_positive_value:
    case errc::length_mismatch:
    case errc::index_out_of_range:
    case errc::non_positive_lambda:
    case errc::non_positive_spectral_parameter:
    case errc::grid_cutoff_mismatch:
    case errc::out_of_band:
    case errc::degenerate_grid:
    case errc::negative_magnitude:
    case errc::asymmetric_window:
    case errc::non_positive_scale:
    case errc::toy_requires_single_jump:
    case errc::parse_error:
      return true;
    default:
      return false;
  }
}

}  // namespace varbw
