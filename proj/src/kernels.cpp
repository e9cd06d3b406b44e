#include "varbw/kernels.hpp"

#include <cmath>

#include "varbw/errors.hpp"

namespace varbw {

double sinc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

ToyModelParams ToyModelParams::make(double p_minus, double p_plus,
                                    double lambda_max) {
  if (!(p_minus > 0.0) || !(p_plus > 0.0))
    raise(errc::non_positive_value, "toy model needs p_-, p_+ > 0");
  if (!(lambda_max > 0.0))
    raise(errc::non_positive_lambda, "toy model needs a positive cutoff");
  ToyModelParams t;
  t.p_minus = p_minus;
  t.p_plus = p_plus;
  t.lambda_max = lambda_max;
  t.c_minus = std::sqrt(lambda_max / p_minus);
  t.c_plus = std::sqrt(lambda_max / p_plus);
  const double s = std::sqrt(p_plus) + std::sqrt(p_minus);
  t.rho_minus = std::sqrt(p_minus) / s;
  t.rho_plus = std::sqrt(p_plus) / s;
  return t;
}

ToyModelParams ToyModelParams::from_profile(const BandwidthProfile& profile,
                                            const SpectralCutoff& cutoff) {
  if (profile.jumps() != 1 || profile.breakpoints[0] != 0.0)
    raise(errc::toy_requires_single_jump,
          "closed-form kernel needs exactly one jump at x = 0");
  return make(profile.values[0], profile.values[1], cutoff.lambda_max);
}

double kernel_toy(const ToyModelParams& t, double x, double y) {
  const bool xm = x <= 0.0;
  const bool ym = y <= 0.0;
  const double drho = t.rho_plus - t.rho_minus;
  if (xm && ym)
    return t.c_minus / M_PI *
           (sinc(t.c_minus * (x - y)) - drho * sinc(t.c_minus * (x + y)));
  if (!xm && !ym)
    return t.c_plus / M_PI *
           (sinc(t.c_plus * (x - y)) + drho * sinc(t.c_plus * (x + y)));
  if (xm)  // x <= 0 < y
    return 2.0 * t.c_plus * t.rho_plus / M_PI *
           sinc(t.c_minus * x - t.c_plus * y);
  return 2.0 * t.c_minus * t.rho_minus / M_PI *
         sinc(t.c_plus * x - t.c_minus * y);
}

Eigen::MatrixXd kernel_generic_matrix(const CoefficientTable& table,
                                      const SpectralCutoff& cutoff,
                                      const Eigen::VectorXd& xs,
                                      const Eigen::VectorXd& ys,
                                      const QuadratureConfig& quad,
                                      double* max_imag) {
  const double z = cutoff.zeta_max;
  const double qmax = table.profile.wavenumber_scales.maxCoeff();
  const double xmax = xs.size() ? xs.cwiseAbs().maxCoeff() : 0.0;
  const double ymax = ys.size() ? ys.cwiseAbs().maxCoeff() : 0.0;
  const int panels =
      oscillation_panels(z, qmax * (xmax + ymax), quad.min_panels);
  const PanelRule rule =
      composite_gauss_legendre(0.0, z, panels, quad.nodes_per_panel);

  std::vector<int> jx(xs.size()), jy(ys.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    jx[i] = table.profile.interval_of(xs[i]);
  for (Eigen::Index i = 0; i < ys.size(); ++i)
    jy[i] = table.profile.interval_of(ys[i]);

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(xs.size(), ys.size());
  Eigen::VectorXcd px(xs.size()), mx(xs.size()), py(ys.size()), my(ys.size());
  for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
    const double zq = rule.nodes[q];
    const SpectralWeights w = spectral_weight(table, zq * zq);
    const CoefficientsAt co = eval_coefficients(table, zq);
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      const int j = jx[i];
      const Complex e = std::exp(
          Complex(0.0, table.profile.wavenumber_scales[j] * zq * xs[i]));
      px[i] = std::conj(co.a_plus[j] * e + co.b_plus[j] / e);
      mx[i] = std::conj(co.a_minus[j] * e + co.b_minus[j] / e);
    }
    for (Eigen::Index i = 0; i < ys.size(); ++i) {
      const int j = jy[i];
      const Complex e = std::exp(
          Complex(0.0, table.profile.wavenumber_scales[j] * zq * ys[i]));
      py[i] = co.a_plus[j] * e + co.b_plus[j] / e;
      my[i] = co.a_minus[j] * e + co.b_minus[j] / e;
    }
    // dlambda = 2 zeta dzeta.
    const double wp = rule.weights[q] * 2.0 * zq * w.plus_weight;
    const double wm = rule.weights[q] * 2.0 * zq * w.minus_weight;
    acc.noalias() += wp * (px * py.transpose());
    acc.noalias() += wm * (mx * my.transpose());
  }
  if (max_imag) *max_imag = acc.imag().cwiseAbs().maxCoeff();
  return acc.real();
}

double kernel_generic(const CoefficientTable& table,
                      const SpectralCutoff& cutoff, double x, double y,
                      const QuadratureConfig& quad, KernelDiagnostics* diag) {
  Eigen::VectorXd xs(1), ys(1);
  xs[0] = x;
  ys[0] = y;
  double imag = 0.0;
  const Eigen::MatrixXd k = kernel_generic_matrix(table, cutoff, xs, ys, quad, &imag);
  if (diag) diag->imag_residue = imag;
  return k(0, 0);
}

double pw_projection(double c, const GridFunction& f, double x) {
  if (!(c > 0.0)) raise(errc::non_positive_scale, "band limit must be > 0");
  if (f.size() < 2) raise(errc::degenerate_grid, "need at least 2 samples");
  const Eigen::VectorXd w = trapezoid_weights(f.x);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i)
    acc += w[i] * sinc(c * (x - f.x[i])) * f.v[i].real();
  return c / M_PI * acc;
}

GridFunction dilate(double a, const GridFunction& f) {
  if (!(a > 0.0))
    raise(errc::non_positive_scale, "dilation scale must be > 0, got " +
                                        std::to_string(a));
  GridFunction out;
  out.x = f.x / a;
  out.v = std::sqrt(a) * f.v;
  out.complex_valued = f.complex_valued;
  return out;
}

namespace {

GridFunction slice(const GridFunction& f, Eigen::Index lo, Eigen::Index hi) {
  GridFunction out;
  out.x = f.x.segment(lo, hi - lo);
  out.v = f.v.segment(lo, hi - lo);
  out.complex_valued = f.complex_valued;
  return out;
}

GridFunction reflect(const GridFunction& f) {
  GridFunction out;
  out.x = -f.x.reverse();
  out.v = f.v.reverse();
  out.complex_valued = f.complex_valued;
  return out;
}

}  // namespace

std::pair<double, double> toy_fixedpoint_residual(const ToyModelParams& t,
                                                  const GridFunction& f) {
  const Eigen::Index n = f.size();
  if (n < 5) raise(errc::degenerate_grid, "need at least 5 samples");
  const double w = std::max(std::abs(f.x[0]), std::abs(f.x[n - 1]));
  if (std::abs(f.x[0] + f.x[n - 1]) > 1e-9 * std::max(1.0, w))
    raise(errc::asymmetric_window, "window must be symmetric about 0");
  Eigen::Index i0 = -1;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::abs(f.x[i]) <= 1e-12 * std::max(1.0, w)) i0 = i;
  if (i0 < 0)
    raise(errc::asymmetric_window, "grid must contain 0 as a sample point");

  const GridFunction left = slice(f, 0, i0 + 1);    // x <= 0
  const GridFunction right = slice(f, i0, n);       // x >= 0
  const double drho = t.rho_plus - t.rho_minus;

  // Negative-half identity: f on R_- reproduces through Pi_{c_-} applied to
  // [f about R_-] - drho [reflected f_-] + 2 rho_+ sqrt(c_+/c_-) [dilated f_+].
  const GridFunction refl_left = reflect(left);
  const GridFunction dil_right = dilate(t.c_minus / t.c_plus, right);
  const double amp_m = 2.0 * t.rho_plus * std::sqrt(t.c_plus / t.c_minus);
  const Eigen::VectorXd wl = trapezoid_weights(left.x);
  double num_m = 0.0, den_m = 0.0;
  for (Eigen::Index i = 0; i <= i0; ++i) {
    const double x = f.x[i];
    const double rhs = pw_projection(t.c_minus, left, x) -
                       drho * pw_projection(t.c_minus, refl_left, x) +
                       amp_m * pw_projection(t.c_minus, dil_right, x);
    const double d = f.v[i].real() - rhs;
    num_m += wl[i] * d * d;
    den_m += wl[i] * f.v[i].real() * f.v[i].real();
  }

  // Positive-half identity, mirrored.
  const GridFunction refl_right = reflect(right);
  const GridFunction dil_left = dilate(t.c_plus / t.c_minus, left);
  const double amp_p = 2.0 * t.rho_minus * std::sqrt(t.c_minus / t.c_plus);
  const Eigen::VectorXd wr = trapezoid_weights(right.x);
  double num_p = 0.0, den_p = 0.0;
  for (Eigen::Index i = i0; i < n; ++i) {
    const double x = f.x[i];
    const double rhs = pw_projection(t.c_plus, right, x) +
                       drho * pw_projection(t.c_plus, refl_right, x) +
                       amp_p * pw_projection(t.c_plus, dil_left, x);
    const double d = f.v[i].real() - rhs;
    num_p += wr[i - i0] * d * d;
    den_p += wr[i - i0] * f.v[i].real() * f.v[i].real();
  }

  const double rm = den_m > 0.0 ? std::sqrt(num_m / den_m) : 0.0;
  const double rp = den_p > 0.0 ? std::sqrt(num_p / den_p) : 0.0;
  return {rm, rp};
}

}  // namespace varbw
