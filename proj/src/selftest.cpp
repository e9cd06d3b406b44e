#include "varbw/selftest.hpp"

#include <algorithm>
#include <chrono>

#include <Eigen/LU>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "varbw/errors.hpp"
#include "varbw/kernels.hpp"
#include "varbw/signret.hpp"

namespace varbw {

double Rng::log_uniform(double a, double b) {
  return std::exp(uniform(std::log(a), std::log(b)));
}

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

BandwidthProfile random_profile(Rng& rng, int jumps, double x_lo, double x_hi,
                                double min_gap, double p_lo, double p_hi) {
  Eigen::VectorXd breaks(jumps);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> b(jumps);
    for (int i = 0; i < jumps; ++i) b[i] = rng.uniform(x_lo, x_hi);
    std::sort(b.begin(), b.end());
    bool ok = true;
    for (int i = 0; i + 1 < jumps; ++i)
      if (b[i + 1] - b[i] < min_gap) ok = false;
    if (!ok) continue;
    for (int i = 0; i < jumps; ++i) breaks[i] = b[i];
    break;
  }
  Eigen::VectorXd values(jumps + 1);
  for (int i = 0; i <= jumps; ++i) values[i] = rng.log_uniform(p_lo, p_hi);
  return make_profile(breaks, values);
}

SpectralDensityPair smooth_density(Rng& rng, int nodes, double zeta_max,
                                   double scale, int taper) {
  constexpr int order = 4;
  Complex cm[order], cp[order];
  for (int m = 0; m < order; ++m) {
    cm[m] = rng.cnormal();
    cp[m] = rng.cnormal();
  }
  Eigen::VectorXd zeta(nodes);
  Eigen::VectorXcd gm(nodes), gp(nodes);
  for (int k = 0; k < nodes; ++k) {
    const double z = zeta_max * (k + 1) / nodes;
    const double t = z / zeta_max;
    const double env = std::pow(4.0 * t * (1.0 - t), taper);
    const double u = 2.0 * t - 1.0;
    Complex sm(0.0, 0.0), sp(0.0, 0.0);
    double um = 1.0;
    for (int m = 0; m < order; ++m) {
      sm += cm[m] * um;
      sp += cp[m] * um;
      um *= u;
    }
    zeta[k] = z;
    gm[k] = scale * env * sm;
    gp[k] = scale * env * sp;
  }
  return make_density(std::move(zeta), std::move(gm), std::move(gp));
}

bool SelftestReport::all_pass() const {
  for (const CriterionResult& r : results)
    if (!r.pass) return false;
  return true;
}

void print_report(const SelftestReport& report) {
  for (const CriterionResult& r : report.results)
    std::printf("[%s] %-32s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str(), r.seconds);
  std::fflush(stdout);
}

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Eigen::VectorXd linspace(double lo, double hi, int n) {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1.0);
  return x;
}

/// Relative error floored at a fraction of the reference's sup norm, so
/// near-zeros of the reference do not blow up the ratio.
double floored_rel_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& ref,
                         double floor_frac = 1e-3) {
  const double floor = floor_frac * ref.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < ref.rows(); ++i)
    for (Eigen::Index j = 0; j < ref.cols(); ++j)
      worst = std::max(worst, std::abs(got(i, j) - ref(i, j)) /
                                  std::max(std::abs(ref(i, j)), floor));
  return worst;
}

struct TestFunction {
  BandwidthProfile profile;
  CoefficientTable table;
  SpectralCutoff cutoff{1.0};
  SpectralDensityPair density;
  GridFunction f;  // real samples
};

/// Real member function sampled on a breakpoint-aligned window.
TestFunction make_test_function(const BandwidthProfile& profile, double lambda,
                                const SpectralDensityPair& density,
                                double half_width, int samples) {
  TestFunction t{profile, propagate_coefficients(profile),
                 SpectralCutoff(lambda), density, {}};
  const Eigen::VectorXd grid =
      breakpoint_aligned_grid(profile, -half_width, half_width, samples);
  const Eigen::VectorXcd fc =
      synthesize_many(t.table, t.cutoff, density, grid);
  t.f = GridFunction::real(grid, fc.real());
  return t;
}

// --- criteria ---------------------------------------------------------------

CriterionResult kernel_single_jump_agreement() {
  CriterionResult r{"kernel_single_jump_agreement", false, "", 0.0};
  Eigen::VectorXd b(1), v(2);
  b << 0.0;
  v << 1.0, 4.0;
  const BandwidthProfile profile = make_profile(b, v);
  const CoefficientTable table = propagate_coefficients(profile);
  const SpectralCutoff cutoff(4.0);
  const ToyModelParams params = ToyModelParams::from_profile(profile, cutoff);
  const Eigen::VectorXd xs = linspace(-5.0, 5.0, 21);
  double imag = 0.0;
  const Eigen::MatrixXd generic =
      kernel_generic_matrix(table, cutoff, xs, xs, {}, &imag);
  Eigen::MatrixXd closed(21, 21);
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) closed(i, j) = kernel_toy(params, xs[i], xs[j]);
  const double err = floored_rel_error(generic, closed);
  r.pass = err <= 1e-6;
  r.detail = fmt("max_rel=%.3g imag=%.3g", err, imag);
  return r;
}

CriterionResult kernel_constant_reduction() {
  CriterionResult r{"kernel_constant_reduction", false, "", 0.0};
  const BandwidthProfile profile =
      make_profile(Eigen::VectorXd(), Eigen::VectorXd::Ones(1));
  const CoefficientTable table = propagate_coefficients(profile);
  const SpectralCutoff cutoff(4.0);
  const double c = cutoff.zeta_max;
  const Eigen::VectorXd xs = linspace(-5.0, 5.0, 21);
  const Eigen::MatrixXd generic = kernel_generic_matrix(table, cutoff, xs, xs);
  Eigen::MatrixXd closed(21, 21);
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j)
      closed(i, j) = c / M_PI * sinc(c * (xs[i] - xs[j]));
  const double err = floored_rel_error(generic, closed);
  r.pass = err <= 1e-8;
  r.detail = fmt("max_rel=%.3g", err);
  return r;
}

std::vector<BandwidthProfile> reproducing_profiles() {
  std::vector<BandwidthProfile> ps;
  ps.push_back(make_profile(Eigen::VectorXd(), Eigen::VectorXd::Ones(1)));
  Eigen::VectorXd b1(1), v1(2);
  b1 << 0.0;
  v1 << 1.0, 4.0;
  ps.push_back(make_profile(b1, v1));
  Eigen::VectorXd b2(2), v2(3);
  b2 << -1.0, 1.3;
  v2 << 1.0, 2.25, 4.0;
  ps.push_back(make_profile(b2, v2));
  return ps;
}

CriterionResult kernel_reproducing_property() {
  CriterionResult r{"kernel_reproducing_property", false, "", 0.0};
  const std::vector<BandwidthProfile> profiles = reproducing_profiles();
  const double lambda = 4.0, W = 36.0;
  const int samples = 3601;
  double worst = 0.0, worst_capture = 1.0;
  int trial = 0;
  for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
    const BandwidthProfile& profile = profiles[pi];
    const CoefficientTable table = propagate_coefficients(profile);
    const SpectralCutoff cutoff(lambda);
    // Shared kernel rows for this profile's evaluation points.
    const Eigen::VectorXd grid =
        breakpoint_aligned_grid(profile, -W, W, samples);
    std::vector<double> inner;
    for (Eigen::Index i = 0; i < grid.size(); i += 25)
      if (std::abs(grid[i]) <= W / 2) inner.push_back(grid[i]);
    const Eigen::VectorXd xe =
        Eigen::Map<Eigen::VectorXd>(inner.data(), inner.size());
    const Eigen::MatrixXd K = kernel_generic_matrix(table, cutoff, xe, grid);
    const Eigen::VectorXd w = trapezoid_weights(grid);
    const int per_profile = pi == 0 ? 4 : 3;  // 10 functions total
    for (int t = 0; t < per_profile; ++t, ++trial) {
      Rng rng(1000 + 17 * trial);
      const SpectralDensityPair density =
          smooth_density(rng, 65, cutoff.zeta_max, 1.0, 5);
      const Eigen::VectorXd f =
          synthesize_many(table, cutoff, density, grid).real();
      // Energy capture proxy: compare with a 1.5x wider coarse window.
      const Eigen::VectorXd wide_grid = breakpoint_aligned_grid(
          profile, -1.5 * W, 1.5 * W, 3 * samples / 2);
      const Eigen::VectorXd fw =
          synthesize_many(table, cutoff, density, wide_grid).real();
      const Eigen::VectorXd ww = trapezoid_weights(wide_grid);
      double e_window = (w.array() * f.array().square()).sum();
      double e_wide = (ww.array() * fw.array().square()).sum();
      worst_capture = std::min(worst_capture, e_window / e_wide);
      const double fmax = f.cwiseAbs().maxCoeff();
      const Eigen::VectorXd reproduced = K * (w.array() * f.array()).matrix();
      for (Eigen::Index i = 0; i < xe.size(); ++i) {
        // xe points are grid points by construction
        const Eigen::Index gi =
            std::lower_bound(grid.data(), grid.data() + grid.size(),
                             xe[i] - 1e-12) -
            grid.data();
        worst = std::max(worst, std::abs(reproduced[i] - f[gi]) / fmax);
      }
    }
  }
  r.pass = worst <= 1e-4 && worst_capture >= 0.9999;
  r.detail = fmt("max_err=%.3g min_capture=%.6f", worst, worst_capture);
  return r;
}

CriterionResult synthesis_continuity() {
  CriterionResult r{"synthesis_continuity", false, "", 0.0};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(2000 + 31 * trial);
    const int jumps = 1 + trial % 3;
    const BandwidthProfile profile =
        random_profile(rng, jumps, -3.0, 3.0, 0.8, 0.25, 4.0);
    const CoefficientTable table = propagate_coefficients(profile);
    const SpectralCutoff cutoff(2.0);
    const SpectralDensityPair density = smooth_density(rng, 33, cutoff.zeta_max);
    double fmax = 0.0;
    for (int i = 0; i < 41; ++i) {
      const double x = -5.0 + 10.0 * i / 40.0;
      fmax = std::max(fmax,
                      std::abs(synthesize(table, cutoff, density, x)));
    }
    for (int j = 1; j <= jumps; ++j) {
      const double xj = profile.breakpoints[j - 1];
      const Complex left = synthesize_on_interval(table, cutoff, density, j - 1, xj);
      const Complex right = synthesize_on_interval(table, cutoff, density, j, xj);
      const double scale = std::max({fmax, std::abs(left), std::abs(right)});
      worst = std::max(worst, std::abs(left - right) / scale);
    }
  }
  r.pass = worst <= 1e-8;
  r.detail = fmt("max_rel_jump=%.3g", worst);
  return r;
}

/// Coefficient vectors by direct complex matrix propagation at one zeta,
/// bypassing the exponential-sum representation.
void matrix_oracle(const BandwidthProfile& profile, double zeta,
                   std::vector<Eigen::Vector2cd>& plus,
                   std::vector<Eigen::Vector2cd>& minus) {
  const int n = profile.jumps();
  minus.assign(n + 1, Eigen::Vector2cd(0.0, 1.0));
  for (int j = 1; j <= n; ++j)
    minus[j] = 0.5 * transfer_matrix(profile, j, zeta) * minus[j - 1];
  plus.assign(n + 1, Eigen::Vector2cd(1.0, 0.0));
  for (int j = n; j >= 1; --j)
    plus[j - 1] = 2.0 * transfer_matrix(profile, j, zeta).inverse() * plus[j];
}

CriterionResult coefficient_determinant_floor() {
  CriterionResult r{"coefficient_determinant_floor", false, "", 0.0};
  double min_det = 1e300, worst_diff = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(3000 + 13 * trial);
    const int jumps = 1 + trial % 4;
    const BandwidthProfile profile =
        random_profile(rng, jumps, -3.0, 3.0, 0.6, 0.25, 4.0);
    const CoefficientTable table = propagate_coefficients(profile);
    const double z = std::sqrt(4.0);
    std::vector<Eigen::Vector2cd> plus, minus;
    for (int k = 1; k <= 101; ++k) {
      const double zeta = z * k / 101.0;
      matrix_oracle(profile, zeta, plus, minus);
      for (int j = 0; j <= jumps; ++j) {
        const Complex det = coefficient_determinant(table, j, zeta);
        const Complex oracle =
            plus[j][0] * minus[j][1] - minus[j][0] * plus[j][1];
        min_det = std::min(min_det, std::abs(det));
        worst_diff = std::max(
            worst_diff, std::abs(det - oracle) / std::max(1.0, std::abs(det)));
      }
    }
  }
  r.pass = min_det > 1e-8 && worst_diff <= 1e-10;
  r.detail = fmt("min_det=%.3g oracle_diff=%.3g", min_det, worst_diff);
  return r;
}

CriterionResult density_recovery_roundtrip() {
  CriterionResult r{"density_recovery_roundtrip", false, "", 0.0};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(4000 + 7 * trial);
    const int jumps = 1 + trial % 3;
    const BandwidthProfile profile =
        random_profile(rng, jumps, -3.0, 3.0, 0.6, 0.25, 4.0);
    const CoefficientTable table = propagate_coefficients(profile);
    const SpectralCutoff cutoff(4.0);
    for (int k = 0; k < 8; ++k) {
      const double zeta = cutoff.zeta_max * rng.uniform(0.05, 1.0);
      const Complex gm = rng.cnormal(), gp = rng.cnormal();
      for (int j = 0; j <= jumps; ++j) {
        const Complex fp = table.minus[j].b.eval(zeta) * gm +
                           table.plus[j].b.eval(zeta) * gp;
        const Complex fn = table.minus[j].a.eval(zeta) * gm +
                           table.plus[j].a.eval(zeta) * gp;
        const auto [rm, rp] = recover_density(table, cutoff, j, fp, fn, zeta);
        const double scale = std::max(std::abs(gm), std::abs(gp));
        worst = std::max(worst, std::max(std::abs(rm - gm), std::abs(rp - gp)) / scale);
      }
    }
  }
  r.pass = worst <= 1e-12;
  r.detail = fmt("max_rel=%.3g", worst);
  return r;
}

CriterionResult transform_parseval() {
  CriterionResult r{"transform_parseval", false, "", 0.0};
  const std::vector<BandwidthProfile> profiles = reproducing_profiles();
  double worst = 0.0;
  int trial = 0;
  for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
    const BandwidthProfile& profile = profiles[pi];
    const int per_profile = pi == 0 ? 4 : 3;
    for (int t = 0; t < per_profile; ++t, ++trial) {
      Rng rng(5000 + 11 * trial);
      const SpectralDensityPair density = smooth_density(rng, 65, 2.0, 1.0, 4);
      const TestFunction tf =
          make_test_function(profile, 4.0, density, 24.0, 2401);
      const double ratio = parseval_ratio(tf.table, tf.cutoff, tf.f);
      worst = std::max(worst, std::abs(ratio - 1.0));
    }
  }
  r.pass = worst <= 0.01;
  r.detail = fmt("max_abs_dev=%.3g", worst);
  return r;
}

struct SignTrialOutcome {
  bool recovered = false;
  double ratio = 0.0;
  double magnitude_err = 0.0;
  double min_flip_ratio = 0.0;
};

SignTrialOutcome run_sign_trial_uncached(int trial) {
  Rng rng(6000 + 101 * trial);
  const int jumps = 1 + trial % 3;
  const double lambda = 2.0, W = 18.0;
  SignTrialOutcome out;
  for (int attempt = 0; attempt < 20; ++attempt) {
    const BandwidthProfile profile =
        random_profile(rng, jumps, -4.0, 4.0, 1.5, 0.5, 4.0);
    const CoefficientTable table = propagate_coefficients(profile);
    const SpectralCutoff cutoff(lambda);
    const SpectralDensityPair density = smooth_density(rng, 48, cutoff.zeta_max);
    const Eigen::VectorXd grid = breakpoint_aligned_grid(profile, -W, W, 3601);
    const Eigen::VectorXd f =
        synthesize_many(table, cutoff, density, grid).real();
    // Every interval must carry a visible share of the energy.
    const Eigen::VectorXd w = trapezoid_weights(grid);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(profile.intervals());
    for (Eigen::Index i = 0; i < grid.size(); ++i)
      e[profile.interval_of(grid[i])] += w[i] * f[i] * f[i];
    if (e.minCoeff() < 0.02 * e.sum()) continue;

    const Eigen::VectorXd m = f.cwiseAbs();
    SignRetrievalConfig config;
    config.zero_tol_rel = 0.04;
    config.fit.density_nodes = 48;
    const SignRetrievalResult res =
        sign_retrieve(profile, cutoff, GridFunction::real(grid, m), config);

    const double fmax = f.cwiseAbs().maxCoeff();
    double err_plus = 0.0, err_minus = 0.0, mag_err = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      if (m[i] <= res.zero_tol) continue;
      err_plus = std::max(err_plus, std::abs(res.f.v[i].real() - f[i]));
      err_minus = std::max(err_minus, std::abs(res.f.v[i].real() + f[i]));
      mag_err = std::max(mag_err, std::abs(std::abs(res.f.v[i].real()) - m[i]));
    }
    out.recovered = std::min(err_plus, err_minus) <= 1e-6 * fmax;
    out.ratio = res.resolution.winner_ratio;
    out.magnitude_err = mag_err;
    // Flipped patterns: every non-winning pattern's residual vs the winner's.
    out.min_flip_ratio = 1e300;
    for (const PatternScore& s : res.resolution.scores)
      if (!s.pattern.equivalent(res.pattern))
        out.min_flip_ratio = std::min(
            out.min_flip_ratio,
            s.residual / std::max(res.resolution.winner_residual, 1e-300));
    return out;
  }
  return out;  // no admissible draw found; counts as failure
}

/// Trials are deterministic, so the two criteria that consume them share one
/// run (single-threaded suite).
const SignTrialOutcome& run_sign_trial(int trial) {
  static std::map<int, SignTrialOutcome> cache;
  auto it = cache.find(trial);
  if (it == cache.end())
    it = cache.emplace(trial, run_sign_trial_uncached(trial)).first;
  return it->second;
}

CriterionResult sign_retrieval_end_to_end() {
  CriterionResult r{"sign_retrieval_end_to_end", false, "", 0.0};
  int recovered = 0, ratio_10 = 0, ratio_100 = 0;
  double max_mag_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const SignTrialOutcome out = run_sign_trial(trial);
    if (out.recovered && out.magnitude_err <= 1e-6) ++recovered;
    if (out.ratio >= 10.0) ++ratio_10;
    if (out.ratio >= 100.0) ++ratio_100;
    max_mag_err = std::max(max_mag_err, out.magnitude_err);
  }
  r.pass = recovered == 50 && ratio_10 == 50 && ratio_100 >= 45;
  r.detail = fmt("recovered=%.0f/50 ratio10=%.0f ratio100=%.0f", recovered,
                 ratio_10, ratio_100);
  return r;
}

CriterionResult flipped_pattern_rejection() {
  CriterionResult r{"flipped_pattern_rejection", false, "", 0.0};
  double min_ratio = 1e300;
  for (int trial = 0; trial < 50; ++trial) {
    const SignTrialOutcome out = run_sign_trial(trial);
    if (!out.recovered) {
      r.detail = "trial " + std::to_string(trial) + " failed recovery";
      return r;
    }
    min_ratio = std::min(min_ratio, out.min_flip_ratio);
  }
  r.pass = min_ratio >= 10.0;
  r.detail = fmt("min_flip_ratio=%.3g", min_ratio);
  return r;
}

CriterionResult half_line_fixed_point() {
  CriterionResult r{"half_line_fixed_point", false, "", 0.0};
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Rng rng(7000 + 23 * trial);
    const double pm = rng.log_uniform(0.5, 3.0);
    double pp = rng.log_uniform(0.5, 3.0);
    if (std::abs(std::log(pp / pm)) < 0.25) pp = pm * 2.0;
    Eigen::VectorXd b(1), v(2);
    b << 0.0;
    v << pm, pp;
    const BandwidthProfile profile = make_profile(b, v);
    const SpectralDensityPair density = smooth_density(rng, 65, 2.0, 1.0, 5);
    const TestFunction tf =
        make_test_function(profile, 4.0, density, 28.0, 2801);
    const ToyModelParams params = ToyModelParams::from_profile(profile, tf.cutoff);
    const auto [rm, rp] = toy_fixedpoint_residual(params, tf.f);
    worst = std::max({worst, rm, rp});
  }
  // Control: a plain band-limited wave for the left band limit does not obey
  // the two-sided identities when the bandwidth actually jumps.
  Eigen::VectorXd b(1), v(2);
  b << 0.0;
  v << 1.0, 4.0;
  const BandwidthProfile profile = make_profile(b, v);
  const SpectralCutoff cutoff(4.0);
  const ToyModelParams params = ToyModelParams::from_profile(profile, cutoff);
  const Eigen::VectorXd grid = breakpoint_aligned_grid(profile, -24.0, 24.0, 2401);
  Eigen::VectorXd control(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    control[i] = sinc(params.c_minus * grid[i]);
  const auto [cm, cp] =
      toy_fixedpoint_residual(params, GridFunction::real(grid, control));
  const double control_res = std::max(cm, cp);
  r.pass = worst <= 1e-3 && control_res >= 1e-2;
  r.detail = fmt("max_residual=%.3g control=%.3g", worst, control_res);
  return r;
}

CriterionResult projection_dilation_calculus() {
  CriterionResult r{"projection_dilation_calculus", false, "", 0.0};
  const Eigen::VectorXd grid = linspace(-30.0, 30.0, 3001);
  Eigen::VectorXd fv(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) fv[i] = sinc(1.3 * grid[i]);
  const GridFunction f = GridFunction::real(grid, fv);
  Rng rng(8000);
  double worst = 0.0, worst_norm = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double a = rng.uniform(0.5, 2.0);
    const double c = rng.uniform(0.5, 2.0);
    const double x = rng.uniform(-5.0, 5.0);
    const GridFunction shrunk = dilate(1.0 / a, f);
    const double lhs = std::sqrt(a) * pw_projection(c, shrunk, a * x);
    const double rhs = pw_projection(a * c, f, x);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    const GridFunction d = dilate(a, f);
    worst_norm = std::max(
        worst_norm, std::abs(grid_norm(d) - grid_norm(f)) / grid_norm(f));
  }
  r.pass = worst <= 1e-8 && worst_norm <= 1e-12;
  r.detail = fmt("max_identity=%.3g max_norm_dev=%.3g", worst, worst_norm);
  return r;
}

}  // namespace

SelftestReport run_selftest(const std::string& filter) {
  using Criterion = std::function<CriterionResult()>;
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"kernel_single_jump_agreement", kernel_single_jump_agreement},
      {"kernel_constant_reduction", kernel_constant_reduction},
      {"kernel_reproducing_property", kernel_reproducing_property},
      {"synthesis_continuity", synthesis_continuity},
      {"coefficient_determinant_floor", coefficient_determinant_floor},
      {"density_recovery_roundtrip", density_recovery_roundtrip},
      {"transform_parseval", transform_parseval},
      {"sign_retrieval_end_to_end", sign_retrieval_end_to_end},
      {"flipped_pattern_rejection", flipped_pattern_rejection},
      {"half_line_fixed_point", half_line_fixed_point},
      {"projection_dilation_calculus", projection_dilation_calculus},
  };
  SelftestReport report;
  for (const auto& [name, fn] : criteria) {
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = fn();
    } catch (const std::exception& e) {
      result.name = name;
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    // Criteria with stated runtime budgets.
    if (name == "kernel_single_jump_agreement" && result.seconds > 10.0) {
      result.pass = false;
      result.detail += " (over 10s budget)";
    }
    if (name == "sign_retrieval_end_to_end" && result.seconds > 60.0) {
      result.pass = false;
      result.detail += " (over 60s budget)";
    }
    report.results.push_back(std::move(result));
  }
  return report;
}

}  // namespace varbw
