#pragma once

#include <Eigen/Core>

#include "varbw/grid.hpp"
#include "varbw/quadrature.hpp"
#include "varbw/spectral.hpp"

namespace varbw {

double sinc(double t);

/// Parameters of the single-jump model with the jump at the origin:
/// band limits c_± = sqrt(lambda_max / p_±) and mixing weights
/// rho_± = sqrt(p_±) / (sqrt(p_+) + sqrt(p_-)). Always rho_+ + rho_- = 1 and
/// c_+ rho_+ = c_- rho_-.
struct ToyModelParams {
  double p_minus, p_plus;
  double lambda_max;
  double c_minus, c_plus;
  double rho_minus, rho_plus;

  static ToyModelParams make(double p_minus, double p_plus, double lambda_max);
  /// Requires a single jump located at x = 0.
  static ToyModelParams from_profile(const BandwidthProfile& profile,
                                     const SpectralCutoff& cutoff);
};

/// Closed-form reproducing kernel of the single-jump space, by case on the
/// signs of x and y (points at 0 take the left branch, like the profile).
double kernel_toy(const ToyModelParams& params, double x, double y);

struct KernelDiagnostics {
  double imag_residue = 0.0;  // |Im k| left by the quadrature
};

/// Reproducing kernel by spectral quadrature,
///   k(x,y) = int conj(Phi(lambda,x)) . Phi(lambda,y) dmu(lambda)
/// over the cutoff band, combining spectral_weight with the fundamental
/// solutions. Returns the real part; the imaginary residue is a diagnostic.
double kernel_generic(const CoefficientTable& table,
                      const SpectralCutoff& cutoff, double x, double y,
                      const QuadratureConfig& quad = {},
                      KernelDiagnostics* diag = nullptr);

/// Batched kernel values on a grid of evaluation points times sample points.
Eigen::MatrixXd kernel_generic_matrix(const CoefficientTable& table,
                                      const SpectralCutoff& cutoff,
                                      const Eigen::VectorXd& xs,
                                      const Eigen::VectorXd& ys,
                                      const QuadratureConfig& quad = {},
                                      double* max_imag = nullptr);

/// Band-limited projection (c/pi) * integral sinc(c(x-y)) f(y) dy by
/// trapezoid quadrature on f's own grid. Real-valued input assumed; the real
/// part of f is used.
double pw_projection(double c, const GridFunction& f, double x);

/// Dilation delta_a f(x) = sqrt(a) f(a x): grid maps to x/a, values scale by
/// sqrt(a). Preserves the (discrete) L2 norm.
GridFunction dilate(double a, const GridFunction& f);

/// Relative L2 residuals of the two half-line consistency identities of the
/// single-jump space, evaluated from f's samples: the restriction of f to
/// each half-line must reproduce itself through the band-limited projection
/// of the reflected/dilated combination of both halves. Requires a window
/// symmetric about 0 containing 0 as a grid point.
std::pair<double, double> toy_fixedpoint_residual(const ToyModelParams& params,
                                                  const GridFunction& f);

}  // namespace varbw
