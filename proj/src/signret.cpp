#include "varbw/signret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varbw/errors.hpp"

namespace varbw {

SignPattern SignPattern::canonical() const {
  SignPattern out = *this;
  if (!out.eps.empty() && out.eps[0] < 0)
    for (int& e : out.eps) e = -e;
  return out;
}

bool SignPattern::equivalent(const SignPattern& other) const {
  if (eps.size() != other.eps.size()) return false;
  bool same = true, negated = true;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    same = same && eps[i] == other.eps[i];
    negated = negated && eps[i] == -other.eps[i];
  }
  return same || negated;
}

Segmentation segment_magnitude(const BandwidthProfile& profile,
                               const GridFunction& m, double zero_tol) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (m.v[i].real() < 0.0)
      raise(errc::negative_magnitude,
            "magnitude sample " + std::to_string(i) + " is negative");
  if (!is_breakpoint_aligned(m.x, profile, 1e-9))
    raise(errc::degenerate_grid, "magnitude grid must contain every breakpoint");

  Segmentation seg;
  seg.by_interval.resize(profile.intervals());
  if (m.size() == 0 || m.max_abs() <= zero_tol) {
    seg.zero_function = true;
    return seg;
  }

  const double absorb_floor = 0.1 * zero_tol;
  Eigen::Index i = 0;
  while (i < m.size()) {
    const int j = profile.interval_of(m.x[i]);
    Eigen::Index lo = i;
    while (i < m.size() && profile.interval_of(m.x[i]) == j) ++i;
    const Eigen::Index hi = i;  // interval j holds samples [lo, hi)

    std::vector<Segment>& segs = seg.by_interval[j];
    Eigen::Index k = lo;
    while (k < hi) {
      while (k < hi && m.v[k].real() <= zero_tol) ++k;
      if (k >= hi) break;
      Eigen::Index b = k;
      while (k < hi) {
        if (m.v[k].real() > zero_tol) {
          ++k;
          continue;
        }
        // Candidate dip: absorb when narrow and shallow.
        Eigen::Index d = k;
        double dip_min = std::numeric_limits<double>::infinity();
        while (d < hi && m.v[d].real() <= zero_tol) {
          dip_min = std::min(dip_min, m.v[d].real());
          ++d;
        }
        if (d < hi && d - k <= 2 && dip_min >= absorb_floor) {
          k = d;  // shallow trough inside the segment
          continue;
        }
        break;
      }
      segs.push_back({j, b, k});
    }
  }
  return seg;
}

namespace {

double segment_slope(const GridFunction& m, const Segment& s, bool at_end,
                     double sign) {
  if (s.end - s.begin < 2) return std::numeric_limits<double>::quiet_NaN();
  const Eigen::Index i = at_end ? s.end - 1 : s.begin + 1;
  return sign * (m.v[i].real() - m.v[i - 1].real()) / (m.x[i] - m.x[i - 1]);
}

}  // namespace

StitchedInterval stitch_interval(const GridFunction& m,
                                 const std::vector<Segment>& segments,
                                 double band_limit,
                                 const SignRetrievalConfig& config) {
  StitchedInterval out;
  if (segments.empty()) return out;
  out.interval = segments.front().interval;
  out.segments = segments;
  out.base_signs.assign(segments.size(), 1);
  if (segments.size() == 1) {
    out.alternates.push_back(out.base_signs);
    return out;
  }

  std::vector<std::size_t> ambiguous;
  double running = 1.0;
  for (std::size_t g = 0; g + 1 < segments.size(); ++g) {
    const Segment& ls = segments[g];
    const Segment& rs = segments[g + 1];
    const Eigen::Index a = ls.end - 1;
    const Eigen::Index b = rs.begin;
    const double gap = m.x[b] - m.x[a];
    const double va = running * m.v[a].real();
    const double dl = segment_slope(m, ls, true, running);

    auto mismatch = [&](double s) {
      const double vb = s * m.v[b].real();
      const double dd = (vb - va) / gap;
      const double dr = segment_slope(m, rs, false, s);
      double acc = 0.0;
      int parts = 0;
      if (std::isfinite(dl)) { acc += std::abs(dd - dl); ++parts; }
      if (std::isfinite(dr)) { acc += std::abs(dr - dd); ++parts; }
      if (parts == 0) acc = std::abs(dd);
      return acc;
    };

    // Candidates are the absolute signs of the right segment: keep the left
    // segment's running sign or flip it.
    const double keep = mismatch(running);
    const double flip = mismatch(-running);
    const double s = keep <= flip ? 1.0 : -1.0;
    const double better = std::min(keep, flip);
    const double worse = std::max(keep, flip);
    const double confidence =
        better > 0.0 ? worse / better : std::numeric_limits<double>::infinity();
    out.confidences.push_back(confidence);

    // A tangential graze fits neither continuation: the winning mismatch
    // stays comparable to the local slope scale instead of far below it.
    const double best_sign = s > 0 ? running : -running;
    double slope_scale = std::abs((best_sign * m.v[b].real() - va) / gap);
    const double dr_best = segment_slope(m, rs, false, best_sign);
    if (std::isfinite(dl)) slope_scale = std::max(slope_scale, std::abs(dl));
    if (std::isfinite(dr_best))
      slope_scale = std::max(slope_scale, std::abs(dr_best));
    const bool tangential = slope_scale > 0.0 && better >= 0.5 * slope_scale;

    // A pair of crossings can hide inside a sub-tolerance gap once the gap is
    // wider than the Bernstein bound sqrt(8 tol) / c; past that the local
    // extrapolation cannot see the parity, so both stitchings are forwarded.
    const bool wide =
        band_limit > 0.0 &&
        gap > 0.8 * std::sqrt(8.0 * config.zero_tol_rel) / band_limit;
    if (confidence < config.confidence_threshold || wide || tangential)
      ambiguous.push_back(g);

    running *= s;
    out.base_signs[g + 1] = static_cast<int>(running);
  }
  out.ambiguous_gaps = ambiguous;

  // Forward every resolution of the ambiguous gaps, base choice first.
  out.alternates.push_back(out.base_signs);
  for (std::size_t gi : ambiguous) {
    const std::size_t count = out.alternates.size();
    for (std::size_t v = 0; v < count; ++v) {
      if (static_cast<int>(out.alternates.size()) >= config.max_alternates) break;
      std::vector<int> alt = out.alternates[v];
      for (std::size_t k = gi + 1; k < alt.size(); ++k) alt[k] = -alt[k];
      out.alternates.push_back(std::move(alt));
    }
  }
  return out;
}

PatternResolution resolve_pattern(const CoefficientTable& table,
                                  const SpectralCutoff& cutoff,
                                  const std::vector<StitchedInterval>& stitched,
                                  const GridFunction& m, double zero_tol,
                                  const SignRetrievalConfig& config) {
  const int intervals = table.profile.intervals();
  PatternResolution out;

  std::vector<const StitchedInterval*> by_interval(intervals, nullptr);
  for (const StitchedInterval& s : stitched)
    if (!s.segments.empty()) by_interval[s.interval] = &s;

  std::vector<int> observed;
  for (int j = 0; j < intervals; ++j)
    if (by_interval[j]) observed.push_back(j);
  if (observed.empty()) {
    out.zero_function = true;
    out.pattern = SignPattern(std::vector<int>(intervals, 1));
    out.flags.push_back("ZeroFunction");
    return out;
  }
  for (int j = 0; j < intervals; ++j)
    if (!by_interval[j])
      out.flags.push_back("interval " + std::to_string(j) +
                          " has no segments; sign fixed +1 by convention");

  // Sign-constrained samples: everything above the zero tolerance.
  std::vector<Eigen::Index> fit_idx;
  std::vector<int> seg_sign(m.size(), 0);
  std::vector<int> interval_of(m.size(), -1);
  for (const StitchedInterval& s : stitched)
    for (std::size_t si = 0; si < s.segments.size(); ++si)
      for (Eigen::Index i = s.segments[si].begin; i < s.segments[si].end; ++i) {
        seg_sign[i] = s.base_signs[si];
        interval_of[i] = s.interval;
      }
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (interval_of[i] >= 0 && m.v[i].real() > zero_tol) fit_idx.push_back(i);

  Eigen::VectorXd fx(fit_idx.size());
  Eigen::VectorXd fm(fit_idx.size());
  for (std::size_t k = 0; k < fit_idx.size(); ++k) {
    fx[k] = m.x[fit_idx[k]];
    fm[k] = m.v[fit_idx[k]].real();
  }
  if (static_cast<int>(fit_idx.size()) < 2 * config.fit.density_nodes)
    raise(errc::degenerate_grid, "too few constrained samples for the fit");

  SynthesisBasis basis = build_synthesis_basis(table, cutoff, fx, config.fit);
  DensityLeastSquares ls(table, cutoff, std::move(basis),
                         trapezoid_weights(fx), config.fit.regularization);

  // Alternate stitchings per interval (base first), combined lexicographically.
  std::vector<std::vector<std::vector<int>>> alts(intervals);
  long combos = 1;
  for (int j : observed) {
    alts[j] = by_interval[j]->alternates;
    if (alts[j].empty()) alts[j].push_back(by_interval[j]->base_signs);
    combos *= static_cast<long>(alts[j].size());
    if (!by_interval[j]->ambiguous_gaps.empty())
      out.flags.push_back("interval " + std::to_string(j) + " has " +
                          std::to_string(by_interval[j]->ambiguous_gaps.size()) +
                          " ambiguous crossings");
  }
  if (combos > config.max_alternates) {
    combos = config.max_alternates;
    out.flags.push_back("alternate stitchings truncated to " +
                        std::to_string(combos));
  }

  const int n_obs = static_cast<int>(observed.size());
  const long n_patterns = 1L << (n_obs - 1);  // first observed interval fixed +1

  struct Best {
    double residual = std::numeric_limits<double>::infinity();
    Eigen::VectorXcd fitted;
    long combo = 0;
  };
  std::vector<Best> best_per_pattern(n_patterns);

  Eigen::VectorXd g(fit_idx.size());
  for (long combo = 0; combo < combos; ++combo) {
    // Decode the combination into per-interval alternate choices.
    std::vector<const std::vector<int>*> choice(intervals, nullptr);
    long c = combo;
    for (int j : observed) {
      choice[j] = &alts[j][c % alts[j].size()];
      c /= static_cast<long>(alts[j].size());
    }
    std::vector<int> local_sign(m.size(), 0);
    for (const StitchedInterval& s : stitched)
      if (!s.segments.empty())
        for (std::size_t si = 0; si < s.segments.size(); ++si)
          for (Eigen::Index i = s.segments[si].begin; i < s.segments[si].end; ++i)
            local_sign[i] = (*choice[s.interval])[si];

    for (long pat = 0; pat < n_patterns; ++pat) {
      std::vector<int> eps(intervals, 1);
      for (int k = 1; k < n_obs; ++k)
        if (pat & (1L << (k - 1))) eps[observed[k]] = -1;
      for (std::size_t k = 0; k < fit_idx.size(); ++k) {
        const Eigen::Index i = fit_idx[k];
        g[k] = eps[interval_of[i]] * local_sign[i] * fm[k];
      }
      const DensityFit fit = ls.solve_real(g);
      if (fit.residual < best_per_pattern[pat].residual) {
        best_per_pattern[pat].residual = fit.residual;
        best_per_pattern[pat].fitted = fit.fitted;
        best_per_pattern[pat].combo = combo;
      }
    }
  }

  long winner = 0;
  for (long pat = 1; pat < n_patterns; ++pat)
    if (best_per_pattern[pat].residual < best_per_pattern[winner].residual)
      winner = pat;
  double runner = std::numeric_limits<double>::infinity();
  for (long pat = 0; pat < n_patterns; ++pat)
    if (pat != winner) runner = std::min(runner, best_per_pattern[pat].residual);

  out.scores.reserve(n_patterns);
  for (long pat = 0; pat < n_patterns; ++pat) {
    std::vector<int> eps(intervals, 1);
    for (int k = 1; k < n_obs; ++k)
      if (pat & (1L << (k - 1))) eps[observed[k]] = -1;
    out.scores.push_back({SignPattern(eps), best_per_pattern[pat].residual});
  }
  std::sort(out.scores.begin(), out.scores.end(),
            [](const PatternScore& a, const PatternScore& b) {
              return a.residual < b.residual;
            });

  out.winner_residual = best_per_pattern[winner].residual;
  out.winner_ratio = n_patterns > 1
                         ? runner / std::max(out.winner_residual, 1e-300)
                         : std::numeric_limits<double>::infinity();
  if (n_patterns > 1 && out.winner_ratio < config.pattern_ratio)
    raise(errc::no_clear_winner,
          "winner-to-runner-up residual ratio " +
              std::to_string(out.winner_ratio) + " below " +
              std::to_string(config.pattern_ratio));

  std::vector<int> eps(intervals, 1);
  for (int k = 1; k < n_obs; ++k)
    if (winner & (1L << (k - 1))) eps[observed[k]] = -1;
  out.pattern = SignPattern(eps).canonical();
  out.reconstruction =
      GridFunction::real(fx, best_per_pattern[winner].fitted.real());

  // Decode the winning stitch-alternate combination.
  out.winning_signs.assign(intervals, {});
  long wc = best_per_pattern[winner].combo;
  for (int j : observed) {
    out.winning_signs[j] = alts[j][wc % alts[j].size()];
    wc /= static_cast<long>(alts[j].size());
  }
  return out;
}

SignRetrievalResult sign_retrieve(const BandwidthProfile& profile,
                                  const SpectralCutoff& cutoff,
                                  const GridFunction& m,
                                  const SignRetrievalConfig& config) {
  SignRetrievalResult out;
  out.zero_tol = config.zero_tol_rel * m.max_abs();

  const Segmentation seg = segment_magnitude(profile, m, out.zero_tol);
  if (seg.zero_function) {
    out.f = GridFunction::real(m.x, Eigen::VectorXd::Zero(m.size()));
    out.pattern = SignPattern(std::vector<int>(profile.intervals(), 1));
    out.resolution.zero_function = true;
    out.resolution.flags.push_back("ZeroFunction");
    return out;
  }

  const CoefficientTable table = propagate_coefficients(profile);
  std::vector<StitchedInterval> stitched;
  for (int j = 0; j < profile.intervals(); ++j) {
    if (seg.by_interval[j].empty()) continue;
    const double c_j = cutoff.zeta_max * profile.wavenumber_scales[j];
    stitched.push_back(
        stitch_interval(m, seg.by_interval[j], c_j, config));
  }

  out.resolution =
      resolve_pattern(table, cutoff, stitched, m, out.zero_tol, config);
  out.pattern = out.resolution.pattern;

  // Signed magnitude on the full grid; below-tolerance samples inherit the
  // sign of the nearest constrained sample of their interval.
  Eigen::VectorXd values(m.size());
  std::vector<int> seg_sign(m.size(), 0);
  for (const StitchedInterval& s : stitched) {
    const std::vector<int>& signs =
        out.resolution.winning_signs[s.interval].empty()
            ? s.base_signs
            : out.resolution.winning_signs[s.interval];
    for (std::size_t si = 0; si < s.segments.size(); ++si)
      for (Eigen::Index i = s.segments[si].begin; i < s.segments[si].end; ++i)
        seg_sign[i] = out.pattern.eps[s.interval] * signs[si];
  }
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    int sgn = seg_sign[i];
    if (sgn == 0) {
      const int j = profile.interval_of(m.x[i]);
      for (Eigen::Index d = 1; d < m.size() && sgn == 0; ++d) {
        if (i - d >= 0 && seg_sign[i - d] != 0 &&
            profile.interval_of(m.x[i - d]) == j)
          sgn = seg_sign[i - d];
        else if (i + d < m.size() && seg_sign[i + d] != 0 &&
                 profile.interval_of(m.x[i + d]) == j)
          sgn = seg_sign[i + d];
      }
      if (sgn == 0) sgn = 1;
    }
    values[i] = sgn * m.v[i].real();
  }
  out.f = GridFunction::real(m.x, values);
  return out;
}

}  // namespace varbw
