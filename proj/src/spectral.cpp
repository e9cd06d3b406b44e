#include "varbw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "varbw/errors.hpp"

namespace varbw {

namespace {

constexpr double kDetFloor = 1e-10;
constexpr double kDenomFloor = 1e-12;

Complex interp_ramped(const Eigen::VectorXd& nodes, const Eigen::VectorXcd& vals,
                      double z, double zeta_max) {
  if (z <= 0.0) return Complex(0.0, 0.0);
  const Eigen::Index n = nodes.size();
  if (n == 0) return Complex(0.0, 0.0);
  if (z <= nodes[0]) return vals[0] * (z / nodes[0]);
  if (z >= nodes[n - 1]) {
    if (z <= nodes[n - 1] + 1e-15) return vals[n - 1];
    const double tail = zeta_max - nodes[n - 1];
    if (tail <= 0.0) return Complex(0.0, 0.0);
    if (z >= zeta_max) return Complex(0.0, 0.0);
    return vals[n - 1] * ((zeta_max - z) / tail);
  }
  const double* begin = nodes.data();
  const double* end = begin + n;
  const Eigen::Index k = std::upper_bound(begin, end, z) - begin;  // z < nodes[k]
  const double t = (z - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
  return vals[k - 1] + t * (vals[k] - vals[k - 1]);
}

/// Panel boundaries for integrating density-dependent integrands: every
/// density node (and zero) becomes a panel edge so each panel sees a smooth
/// integrand.
std::vector<double> density_boundaries(const Eigen::VectorXd& nodes, double lo,
                                       double hi) {
  std::vector<double> bs;
  bs.push_back(lo);
  bs.push_back(hi);
  auto push = [&](double b) {
    if (b > lo + 1e-15 && b < hi - 1e-15) bs.push_back(b);
  };
  push(0.0);
  for (Eigen::Index k = 0; k < nodes.size(); ++k) {
    push(nodes[k]);
    push(-nodes[k]);
  }
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end(),
                       [](double a, double b) { return b - a < 1e-14; }),
           bs.end());
  return bs;
}

PanelRule segmented_rule(const std::vector<double>& boundaries, double rate,
                         const QuadratureConfig& quad) {
  std::vector<double> nodes, weights;
  for (std::size_t s = 0; s + 1 < boundaries.size(); ++s) {
    const double a = boundaries[s];
    const double b = boundaries[s + 1];
    const int panels =
        std::max(1, static_cast<int>(std::ceil(1.25 * (b - a) * rate / (2.0 * M_PI))));
    PanelRule r = composite_gauss_legendre(a, b, panels, quad.nodes_per_panel);
    nodes.insert(nodes.end(), r.nodes.data(), r.nodes.data() + r.nodes.size());
    weights.insert(weights.end(), r.weights.data(),
                   r.weights.data() + r.weights.size());
  }
  PanelRule out;
  out.nodes = Eigen::Map<Eigen::VectorXd>(nodes.data(), nodes.size());
  out.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), weights.size());
  return out;
}

}  // namespace

SpectralCutoff::SpectralCutoff(double lambda) {
  if (!(lambda > 0.0))
    raise(errc::non_positive_lambda,
          "spectral cutoff must be > 0, got " + std::to_string(lambda));
  lambda_max = lambda;
  zeta_max = std::sqrt(lambda);
}

Complex SpectralDensityPair::minus_at(double z, double zeta_max) const {
  return interp_ramped(zeta, g_minus, z, zeta_max);
}

Complex SpectralDensityPair::plus_at(double z, double zeta_max) const {
  return interp_ramped(zeta, g_plus, z, zeta_max);
}

SpectralDensityPair make_density(Eigen::VectorXd zeta, Eigen::VectorXcd g_minus,
                                 Eigen::VectorXcd g_plus) {
  if (zeta.size() != g_minus.size() || zeta.size() != g_plus.size())
    raise(errc::length_mismatch, "density grid and values differ in length");
  require_strictly_increasing(zeta, "density");
  if (zeta.size() && !(zeta[0] > 0.0))
    raise(errc::degenerate_grid, "density grid must start above zero");
  for (Eigen::Index k = 0; k < zeta.size(); ++k)
    if (!std::isfinite(g_minus[k].real()) || !std::isfinite(g_minus[k].imag()) ||
        !std::isfinite(g_plus[k].real()) || !std::isfinite(g_plus[k].imag()))
      raise(errc::parse_error, "density values must be finite");
  SpectralDensityPair d;
  d.zeta = std::move(zeta);
  d.g_minus = std::move(g_minus);
  d.g_plus = std::move(g_plus);
  return d;
}

void validate_density(const SpectralDensityPair& d, const SpectralCutoff& c) {
  if (d.zeta.size() == 0) return;
  if (d.zeta[d.zeta.size() - 1] > c.zeta_max * (1.0 + 1e-12))
    raise(errc::grid_cutoff_mismatch,
          "density grid extends past zeta_max = " + std::to_string(c.zeta_max));
}

SpectralWeights spectral_weight(const CoefficientTable& table, double lambda) {
  if (!(lambda > 0.0))
    raise(errc::non_positive_lambda,
          "lambda must be > 0, got " + std::to_string(lambda));
  const int n = table.profile.jumps();
  const double zeta = std::sqrt(lambda);
  const Complex b = table.minus[n].b.eval(zeta);
  const double b2 = std::norm(b);
  if (b2 < kDenomFloor * kDenomFloor)
    raise(errc::vanishing_denominator,
          "|b_N^-| below tolerance at zeta = " + std::to_string(zeta));
  const double pn = table.profile.values[n];
  const double s = 1.0 / (4.0 * M_PI * pn * b2 * zeta);
  return {s / table.profile.wavenumber_scales[n],
          s / table.profile.wavenumber_scales[0]};
}

Complex interval_fourier_density(const CoefficientTable& table,
                                 const SpectralCutoff& cutoff,
                                 const SpectralDensityPair& density, int j,
                                 double zeta) {
  if (j < 0 || j >= table.profile.intervals())
    raise(errc::index_out_of_range, "interval index out of range");
  const double az = std::abs(zeta);
  if (az == 0.0 || az > cutoff.zeta_max * (1.0 + 1e-12))
    raise(errc::out_of_band,
          "zeta must satisfy 0 < |zeta| <= zeta_max, got " + std::to_string(zeta));
  const Complex gm = density.minus_at(az, cutoff.zeta_max);
  const Complex gp = density.plus_at(az, cutoff.zeta_max);
  if (zeta > 0.0)
    return table.minus[j].b.eval(az) * gm + table.plus[j].b.eval(az) * gp;
  return table.minus[j].a.eval(az) * gm + table.plus[j].a.eval(az) * gp;
}

namespace {

Eigen::VectorXcd synthesize_group(const CoefficientTable& table,
                                  const SpectralCutoff& cutoff,
                                  const SpectralDensityPair& density, int j,
                                  const Eigen::VectorXd& xs,
                                  const QuadratureConfig& quad) {
  const double z = cutoff.zeta_max;
  const double qj = table.profile.wavenumber_scales[j];
  const double max_x = xs.size() ? xs.cwiseAbs().maxCoeff() : 0.0;
  const PanelRule rule =
      segmented_rule(density_boundaries(density.zeta, -z, z), qj * max_x, quad);
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(xs.size());
  for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
    const double zq = rule.nodes[q];
    const double az = std::abs(zq);
    const Complex gm = density.minus_at(az, z);
    const Complex gp = density.plus_at(az, z);
    Complex gj;
    if (zq > 0.0)
      gj = table.minus[j].b.eval(az) * gm + table.plus[j].b.eval(az) * gp;
    else
      gj = table.minus[j].a.eval(az) * gm + table.plus[j].a.eval(az) * gp;
    const Complex wgj = rule.weights[q] * gj;
    for (Eigen::Index i = 0; i < xs.size(); ++i)
      acc[i] += wgj * std::exp(Complex(0.0, -qj * zq * xs[i]));
  }
  return acc;
}

}  // namespace

Complex synthesize_on_interval(const CoefficientTable& table,
                               const SpectralCutoff& cutoff,
                               const SpectralDensityPair& density, int j,
                               double x, const QuadratureConfig& quad) {
  if (j < 0 || j >= table.profile.intervals())
    raise(errc::index_out_of_range, "interval index out of range");
  validate_density(density, cutoff);
  Eigen::VectorXd xs(1);
  xs[0] = x;
  return synthesize_group(table, cutoff, density, j, xs, quad)[0];
}

Complex synthesize(const CoefficientTable& table, const SpectralCutoff& cutoff,
                   const SpectralDensityPair& density, double x,
                   const QuadratureConfig& quad) {
  return synthesize_on_interval(table, cutoff, density,
                                table.profile.interval_of(x), x, quad);
}

Eigen::VectorXcd synthesize_many(const CoefficientTable& table,
                                 const SpectralCutoff& cutoff,
                                 const SpectralDensityPair& density,
                                 const Eigen::VectorXd& xs,
                                 const QuadratureConfig& quad) {
  validate_density(density, cutoff);
  const int m = table.profile.intervals();
  std::vector<std::vector<Eigen::Index>> groups(m);
  for (Eigen::Index i = 0; i < xs.size(); ++i)
    groups[table.profile.interval_of(xs[i])].push_back(i);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(xs.size());
  for (int j = 0; j < m; ++j) {
    if (groups[j].empty()) continue;
    Eigen::VectorXd gx(groups[j].size());
    for (std::size_t k = 0; k < groups[j].size(); ++k) gx[k] = xs[groups[j][k]];
    const Eigen::VectorXcd gv =
        synthesize_group(table, cutoff, density, j, gx, quad);
    for (std::size_t k = 0; k < groups[j].size(); ++k) out[groups[j][k]] = gv[k];
  }
  return out;
}

std::pair<Complex, Complex> recover_density(const CoefficientTable& table,
                                            const SpectralCutoff& cutoff, int j,
                                            Complex fhat_pos, Complex fhat_neg,
                                            double zeta) {
  if (j < 0 || j >= table.profile.intervals())
    raise(errc::index_out_of_range, "interval index out of range");
  if (!(zeta > 0.0) || zeta > cutoff.zeta_max * (1.0 + 1e-12))
    raise(errc::out_of_band,
          "zeta must lie in (0, zeta_max], got " + std::to_string(zeta));
  const Complex am = table.minus[j].a.eval(zeta);
  const Complex bm = table.minus[j].b.eval(zeta);
  const Complex ap = table.plus[j].a.eval(zeta);
  const Complex bp = table.plus[j].b.eval(zeta);
  const Complex det = bm * ap - bp * am;
  if (std::abs(det) < kDetFloor)
    raise(errc::near_singular_system,
          "recovery system determinant below tolerance at zeta = " +
              std::to_string(zeta));
  return {(fhat_pos * ap - bp * fhat_neg) / det,
          (bm * fhat_neg - fhat_pos * am) / det};
}

namespace {

/// phi_plus and phi_minus at one zeta for precomputed interval assignments.
void eval_solutions(const CoefficientTable& table,
                    const std::vector<int>& interval_of_sample,
                    const Eigen::VectorXd& xs, double zeta,
                    Eigen::VectorXcd& phi_plus, Eigen::VectorXcd& phi_minus) {
  const CoefficientsAt co = eval_coefficients(table, zeta);
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    const int j = interval_of_sample[i];
    const Complex e = std::exp(
        Complex(0.0, table.profile.wavenumber_scales[j] * zeta * xs[i]));
    phi_plus[i] = co.a_plus[j] * e + co.b_plus[j] / e;
    phi_minus[i] = co.a_minus[j] * e + co.b_minus[j] / e;
  }
}

std::vector<int> sample_intervals(const BandwidthProfile& p,
                                  const Eigen::VectorXd& xs) {
  std::vector<int> idx(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) idx[i] = p.interval_of(xs[i]);
  return idx;
}

}  // namespace

SpectralData forward_transform(const CoefficientTable& table,
                               const SpectralCutoff& cutoff,
                               const GridFunction& f,
                               const Eigen::VectorXd& lambda_grid) {
  (void)cutoff;
  if (f.size() < 2) raise(errc::degenerate_grid, "need at least 2 samples");
  const Eigen::VectorXd w = trapezoid_weights(f.x);
  const double fmax = f.max_abs();
  const double edge = std::max(std::abs(f.v[0]), std::abs(f.v[f.size() - 1]));
  if (fmax > 0.0 && edge > 0.05 * fmax)
    raise(errc::window_too_narrow,
          "|f| at the window edge is " + std::to_string(edge / fmax) +
              " of its peak; widen the window");

  SpectralData out;
  out.lambda = lambda_grid;
  out.f_plus.resize(lambda_grid.size());
  out.f_minus.resize(lambda_grid.size());

  const std::vector<int> idx = sample_intervals(table.profile, f.x);
  Eigen::VectorXcd phi_p(f.size()), phi_m(f.size());
  for (Eigen::Index k = 0; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] > 0.0))
      raise(errc::non_positive_lambda, "lambda grid entries must be > 0");
    const double zeta = std::sqrt(lambda_grid[k]);
    eval_solutions(table, idx, f.x, zeta, phi_p, phi_m);
    Complex fp(0.0, 0.0), fm(0.0, 0.0);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const Complex wf = w[i] * f.v[i];
      fp += wf * std::conj(phi_p[i]);
      fm += wf * std::conj(phi_m[i]);
    }
    out.f_plus[k] = fp;
    out.f_minus[k] = fm;
  }

  // Tail report: |f|^2 mass in the outer 10% of the window.
  const double span = f.x[f.size() - 1] - f.x[0];
  const double lo = f.x[0] + 0.1 * span;
  const double hi = f.x[f.size() - 1] - 0.1 * span;
  double tail = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double e = w[i] * std::norm(f.v[i]);
    total += e;
    if (f.x[i] < lo || f.x[i] > hi) tail += e;
  }
  out.window_tail_fraction = total > 0.0 ? tail / total : 0.0;
  out.truncation_estimate = std::sqrt(out.window_tail_fraction);
  return out;
}

double spectral_energy(const CoefficientTable& table, const GridFunction& f,
                       double zeta_lo, double zeta_hi,
                       const QuadratureConfig& quad) {
  if (!(zeta_hi > zeta_lo) || zeta_lo < 0.0)
    raise(errc::out_of_band, "need 0 <= zeta_lo < zeta_hi");
  const int n = table.profile.jumps();
  const double q0 = table.profile.wavenumber_scales[0];
  const double qn = table.profile.wavenumber_scales[n];
  const double pn = table.profile.values[n];
  const Eigen::VectorXd w = trapezoid_weights(f.x);
  const double max_x = f.x.cwiseAbs().maxCoeff();
  const double rate = table.profile.wavenumber_scales.maxCoeff() * max_x;
  const int panels =
      oscillation_panels(zeta_hi - zeta_lo, rate, quad.min_panels);
  const PanelRule rule =
      composite_gauss_legendre(zeta_lo, zeta_hi, panels, quad.nodes_per_panel);
  const std::vector<int> idx = sample_intervals(table.profile, f.x);
  Eigen::VectorXcd phi_p(f.size()), phi_m(f.size());
  double acc = 0.0;
  for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
    const double zq = rule.nodes[q];
    eval_solutions(table, idx, f.x, zq, phi_p, phi_m);
    Complex fp(0.0, 0.0), fm(0.0, 0.0);
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const Complex wf = w[i] * f.v[i];
      fp += wf * std::conj(phi_p[i]);
      fm += wf * std::conj(phi_m[i]);
    }
    const double b2 = std::norm(table.minus[n].b.eval(zq));
    acc += rule.weights[q] * (std::norm(fp) / q0 + std::norm(fm) / qn) /
           (2.0 * M_PI * pn * b2);
  }
  return acc;
}

double parseval_ratio(const CoefficientTable& table,
                      const SpectralCutoff& cutoff, const GridFunction& f,
                      const QuadratureConfig& quad) {
  const Eigen::VectorXd w = trapezoid_weights(f.x);
  const double norm2 = (w.array() * f.v.array().abs2()).sum();
  if (norm2 == 0.0) raise(errc::degenerate_grid, "zero function");
  return spectral_energy(table, f, 0.0, cutoff.zeta_max, quad) / norm2;
}

SynthesisBasis build_synthesis_basis(const CoefficientTable& table,
                                     const SpectralCutoff& cutoff,
                                     const Eigen::VectorXd& xs,
                                     const FitConfig& fit) {
  const int K = fit.density_nodes;
  if (K < 2) raise(errc::degenerate_grid, "need at least 2 density nodes");
  const double z = cutoff.zeta_max;
  SynthesisBasis basis;
  basis.zeta_nodes.resize(K);
  for (int k = 0; k < K; ++k) basis.zeta_nodes[k] = z * (k + 1) / K;
  basis.columns = Eigen::MatrixXcd::Zero(xs.size(), 2 * K);

  const double max_x = xs.size() ? xs.cwiseAbs().maxCoeff() : 0.0;
  const double rate = table.profile.wavenumber_scales.maxCoeff() * max_x;
  const PanelRule rule = segmented_rule(
      density_boundaries(basis.zeta_nodes, 0.0, z), rate, fit.quad);
  const std::vector<int> idx = sample_intervals(table.profile, xs);
  const double step = z / K;

  Eigen::VectorXcd phi_p(xs.size()), phi_m(xs.size());
  for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
    const double zq = rule.nodes[q];
    eval_solutions(table, idx, xs, zq, phi_p, phi_m);
    // Hat weights: zq lies in segment [zeta_{s-1}, zeta_s] with zeta_{-1}=0.
    const int s = std::min(K - 1, static_cast<int>(zq / step));
    const double left_edge = s * step;
    const double t = (zq - left_edge) / step;
    const double wq = rule.weights[q];
    const double w_right = wq * t;
    const double w_left = wq * (1.0 - t);
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      basis.columns(i, s) += w_right * phi_m[i];
      basis.columns(i, K + s) += w_right * phi_p[i];
      if (s >= 1) {
        basis.columns(i, s - 1) += w_left * phi_m[i];
        basis.columns(i, K + s - 1) += w_left * phi_p[i];
      }
    }
  }
  return basis;
}

DensityLeastSquares::DensityLeastSquares(const CoefficientTable& table,
                                         const SpectralCutoff& cutoff,
                                         SynthesisBasis basis,
                                         Eigen::VectorXd weights,
                                         double regularization)
    : basis_(std::move(basis)), weights_(std::move(weights)) {
  (void)cutoff;
  const Eigen::Index n = basis_.columns.rows();
  const Eigen::Index m = basis_.columns.cols();
  if (weights_.size() != n)
    raise(errc::length_mismatch, "weights and basis rows differ");

  const Eigen::MatrixXcd& A = basis_.columns;
  Eigen::MatrixXcd wa = weights_.asDiagonal() * A;
  Eigen::MatrixXcd gram = A.adjoint() * wa;
  double scale = gram.diagonal().real().maxCoeff();
  if (scale <= 0.0) scale = 1.0;
  gram.diagonal().array() += regularization * scale;
  complex_gram_ = gram.ldlt();

  real_design_.resize(n, 2 * m);
  real_design_.leftCols(m) = A.real();
  real_design_.rightCols(m) = -A.imag();
  Eigen::MatrixXd rgram =
      real_design_.transpose() * (weights_.asDiagonal() * real_design_);
  double rscale = rgram.diagonal().maxCoeff();
  if (rscale <= 0.0) rscale = 1.0;
  rgram.diagonal().array() += regularization * rscale;
  real_gram_ = rgram.ldlt();

  // Conjugation transfer at the nodes: with phi_± the fundamental solutions,
  //   conj(phi_-) = mm phi_- + mp phi_+,   conj(phi_+) = pm phi_- + pp phi_+,
  // expressed through the last-interval coefficients.
  const int last = table.profile.jumps();
  const Eigen::Index K = basis_.zeta_nodes.size();
  conj_to_minus_.resize(K);
  conj_cross_minus_.resize(K);
  conj_to_plus_.resize(K);
  conj_cross_plus_.resize(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const double zk = basis_.zeta_nodes[k];
    const Complex a = table.minus[last].a.eval(zk);
    const Complex b = table.minus[last].b.eval(zk);
    conj_to_minus_[k] = std::conj(a) / b;                    // mm
    conj_cross_minus_[k] = (std::norm(b) - std::norm(a)) / b;  // mp
    conj_to_plus_[k] = -a / b;                               // pp
    conj_cross_plus_[k] = 1.0 / b;                           // pm
  }
}

DensityFit DensityLeastSquares::solve_complex(const Eigen::VectorXcd& g) const {
  const Eigen::MatrixXcd& A = basis_.columns;
  const Eigen::Index K = basis_.zeta_nodes.size();
  DensityFit fit;
  const double g2 = (weights_.array() * g.array().abs2()).sum();
  if (g2 == 0.0) {
    fit.node_minus = Eigen::VectorXcd::Zero(K);
    fit.node_plus = Eigen::VectorXcd::Zero(K);
    fit.fitted = Eigen::VectorXcd::Zero(g.size());
    return fit;
  }
  const Eigen::VectorXcd rhs = A.adjoint() * (weights_.asDiagonal() * g);
  const Eigen::VectorXcd c = complex_gram_.solve(rhs);
  fit.node_minus = c.head(K);
  fit.node_plus = c.tail(K);
  fit.fitted = A * c;
  const double r2 = (weights_.array() * (g - fit.fitted).array().abs2()).sum();
  fit.residual = std::sqrt(std::max(0.0, r2) / g2);
  return fit;
}

DensityFit DensityLeastSquares::solve_real(const Eigen::VectorXd& g) const {
  const Eigen::Index K = basis_.zeta_nodes.size();
  DensityFit fit;
  const double g2 = (weights_.array() * g.array().square()).sum();
  if (g2 == 0.0) {
    fit.node_minus = Eigen::VectorXcd::Zero(K);
    fit.node_plus = Eigen::VectorXcd::Zero(K);
    fit.fitted = Eigen::VectorXcd::Zero(g.size());
    return fit;
  }
  const Eigen::VectorXd rhs =
      real_design_.transpose() * (weights_.asDiagonal() * g);
  const Eigen::VectorXd h = real_gram_.solve(rhs);
  const Eigen::VectorXd fitted = real_design_ * h;
  const Eigen::VectorXcd hc =
      h.head(2 * K) + Complex(0.0, 1.0) * h.tail(2 * K);
  const Eigen::VectorXcd hm = hc.head(K);
  const Eigen::VectorXcd hp = hc.tail(K);
  // Density of the real fit: symmetrize through the conjugation transfer.
  fit.node_minus.resize(K);
  fit.node_plus.resize(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    fit.node_minus[k] = 0.5 * (hm[k] + std::conj(hm[k]) * conj_to_minus_[k] +
                               std::conj(hp[k]) * conj_cross_plus_[k]);
    fit.node_plus[k] = 0.5 * (hp[k] + std::conj(hm[k]) * conj_cross_minus_[k] +
                              std::conj(hp[k]) * conj_to_plus_[k]);
  }
  fit.fitted = fitted.cast<Complex>();
  const double r2 = (weights_.array() * (g - fitted).array().square()).sum();
  fit.residual = std::sqrt(std::max(0.0, r2) / g2);
  return fit;
}

MembershipResult membership_residual(const CoefficientTable& table,
                                     const SpectralCutoff& cutoff,
                                     const GridFunction& g,
                                     const FitConfig& fit) {
  if (!is_breakpoint_aligned(g.x, table.profile, 1e-9))
    raise(errc::degenerate_grid, "sample grid must contain every breakpoint");
  if (g.size() < 2 * fit.density_nodes)
    raise(errc::degenerate_grid,
          "fewer samples than density unknowns: " + std::to_string(g.size()) +
              " < " + std::to_string(2 * fit.density_nodes));
  SynthesisBasis basis = build_synthesis_basis(table, cutoff, g.x, fit);
  DensityLeastSquares ls(table, cutoff, std::move(basis),
                         trapezoid_weights(g.x), fit.regularization);
  const DensityFit df = g.complex_valued
                            ? ls.solve_complex(g.v)
                            : ls.solve_real(g.v.real().eval());
  MembershipResult out;
  out.residual = df.residual;
  out.density = make_density(ls.basis().zeta_nodes, df.node_minus, df.node_plus);
  out.fitted = df.fitted;
  return out;
}

}  // namespace varbw
