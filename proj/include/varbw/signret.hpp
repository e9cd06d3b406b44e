#pragma once

#include <string>
#include <vector>

#include "varbw/grid.hpp"
#include "varbw/profile.hpp"
#include "varbw/spectral.hpp"

namespace varbw {

/// Per-interval signs, up to one global sign. Canonical form fixes the first
/// entry to +1; two patterns are equivalent iff equal or globally negated.
struct SignPattern {
  std::vector<int> eps;

  SignPattern() = default;
  explicit SignPattern(std::vector<int> e) : eps(std::move(e)) {}

  SignPattern canonical() const;
  bool equivalent(const SignPattern& other) const;
  bool operator==(const SignPattern& other) const { return eps == other.eps; }
};

/// Maximal runs of samples with magnitude above the zero tolerance, indexed
/// into the full sample grid; each segment lies inside one interval.
struct Segment {
  int interval;
  Eigen::Index begin;
  Eigen::Index end;  // half-open
};

struct Segmentation {
  std::vector<std::vector<Segment>> by_interval;
  bool zero_function = false;
};

/// Splits each interval's samples at zero regions of the magnitude. Narrow
/// sub-tolerance dips (width <= 2 samples) that stay above a tenth of the
/// tolerance are shallow troughs, not zeros, and are absorbed; dips reaching
/// deeper split the segment regardless of width.
Segmentation segment_magnitude(const BandwidthProfile& profile,
                               const GridFunction& m, double zero_tol);

struct SignRetrievalConfig {
  double zero_tol_rel = 1e-6;        // zero tolerance relative to max(m)
  double confidence_threshold = 1.5; // stitch acceptance ratio
  double pattern_ratio = 10.0;       // winner-to-runner-up requirement
  int max_alternates = 256;          // cap on forwarded stitch alternates
  FitConfig fit{};
};

/// Relative signs of one interval's segments. Consecutive segments are signed
/// by minimizing the jump of the first divided difference extrapolated across
/// the zero region; a band-limited real function crosses its zeros smoothly.
/// Gaps with candidate-mismatch ratio below the confidence threshold, or
/// wider than half an oscillation period of the interval's band limit, are
/// kept ambiguous and both stitchings are forwarded.
struct StitchedInterval {
  int interval = 0;
  std::vector<Segment> segments;
  std::vector<int> base_signs;                // one per segment, first = +1
  std::vector<double> confidences;            // one per gap
  std::vector<std::size_t> ambiguous_gaps;
  std::vector<std::vector<int>> alternates;   // candidate sign vectors, base first
};

StitchedInterval stitch_interval(const GridFunction& m,
                                 const std::vector<Segment>& segments,
                                 double band_limit,
                                 const SignRetrievalConfig& config = {});

struct PatternScore {
  SignPattern pattern;
  double residual;
};

struct PatternResolution {
  SignPattern pattern;            // winner, canonical
  GridFunction reconstruction;    // least-squares fit on the constrained samples
  std::vector<PatternScore> scores;  // best residual per canonical pattern
  double winner_residual = 0.0;
  double winner_ratio = 0.0;      // runner-up / winner
  bool zero_function = false;
  std::vector<std::string> flags;
  /// Winning within-interval segment signs (the stitch alternate the global
  /// fit selected), keyed by interval; pattern signs not applied.
  std::vector<std::vector<int>> winning_signs;
};

/// Scores every canonical global sign pattern by membership misfit of the
/// signed magnitude and requires a unique minimizer: sign consistency across
/// intervals is exactly what distinguishes members of the space.
PatternResolution resolve_pattern(const CoefficientTable& table,
                                  const SpectralCutoff& cutoff,
                                  const std::vector<StitchedInterval>& stitched,
                                  const GridFunction& m, double zero_tol,
                                  const SignRetrievalConfig& config = {});

struct SignRetrievalResult {
  GridFunction f;       // signed magnitude on the input grid
  SignPattern pattern;
  PatternResolution resolution;
  double zero_tol = 0.0;
};

/// Full pipeline: segment the magnitude, stitch segment signs inside each
/// interval, resolve the interval pattern globally. The output is canonical
/// (first interval positive) and satisfies | |f| - m | = 0 on the samples.
SignRetrievalResult sign_retrieve(const BandwidthProfile& profile,
                                  const SpectralCutoff& cutoff,
                                  const GridFunction& m,
                                  const SignRetrievalConfig& config = {});

}  // namespace varbw
