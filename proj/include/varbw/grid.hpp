#pragma once

#include <Eigen/Core>
#include <complex>

#include "varbw/profile.hpp"

namespace varbw {

/// Function sampled on a strictly increasing grid. Values are stored as
/// complex; `complex_valued` records whether the imaginary part is meaningful
/// (it drives the CSV layout on output).
struct GridFunction {
  Eigen::VectorXd x;
  Eigen::VectorXcd v;
  bool complex_valued = false;

  static GridFunction real(Eigen::VectorXd grid, const Eigen::VectorXd& values);
  static GridFunction complex(Eigen::VectorXd grid, Eigen::VectorXcd values);

  Eigen::Index size() const { return x.size(); }
  Eigen::VectorXd real_values() const { return v.real(); }
  double max_abs() const { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
};

/// Trapezoid weights for a strictly increasing grid.
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& x);

/// Weighted L2 norm: sqrt(sum_i w_i |v_i|^2) with trapezoid weights.
double grid_norm(const GridFunction& f);

/// Uniform grid of about `n` points on [lo, hi] with every profile breakpoint
/// inside the span inserted exactly.
Eigen::VectorXd breakpoint_aligned_grid(const BandwidthProfile& profile,
                                        double lo, double hi, int n);

/// True when every breakpoint inside [x.min, x.max] coincides with a grid
/// point up to `tol`.
bool is_breakpoint_aligned(const Eigen::VectorXd& x,
                           const BandwidthProfile& profile, double tol = 1e-12);

void require_strictly_increasing(const Eigen::VectorXd& x, const char* what);

}  // namespace varbw
