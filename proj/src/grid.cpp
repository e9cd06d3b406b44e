#include "varbw/grid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "varbw/errors.hpp"

namespace varbw {

void require_strictly_increasing(const Eigen::VectorXd& x, const char* what) {
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1]))
      raise(errc::degenerate_grid,
            std::string(what) + " grid must be strictly increasing at index " +
                std::to_string(i + 1));
}

GridFunction GridFunction::real(Eigen::VectorXd grid,
                                const Eigen::VectorXd& values) {
  if (grid.size() != values.size())
    raise(errc::length_mismatch, "grid and values differ in length");
  require_strictly_increasing(grid, "sample");
  GridFunction f;
  f.x = std::move(grid);
  f.v = values.cast<std::complex<double>>();
  f.complex_valued = false;
  return f;
}

GridFunction GridFunction::complex(Eigen::VectorXd grid,
                                   Eigen::VectorXcd values) {
  if (grid.size() != values.size())
    raise(errc::length_mismatch, "grid and values differ in length");
  require_strictly_increasing(grid, "sample");
  GridFunction f;
  f.x = std::move(grid);
  f.v = std::move(values);
  f.complex_valued = true;
  return f;
}

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  if (n < 2) return w;
  w[0] = 0.5 * (x[1] - x[0]);
  w[n - 1] = 0.5 * (x[n - 1] - x[n - 2]);
  for (Eigen::Index i = 1; i + 1 < n; ++i) w[i] = 0.5 * (x[i + 1] - x[i - 1]);
  return w;
}

double grid_norm(const GridFunction& f) {
  const Eigen::VectorXd w = trapezoid_weights(f.x);
  return std::sqrt((w.array() * f.v.array().abs2()).sum());
}

Eigen::VectorXd breakpoint_aligned_grid(const BandwidthProfile& profile,
                                        double lo, double hi, int n) {
  if (!(lo < hi) || n < 2)
    raise(errc::degenerate_grid, "need lo < hi and at least 2 grid points");
  std::vector<double> pts;
  pts.reserve(n + profile.jumps());
  for (int i = 0; i < n; ++i)
    pts.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
  for (int j = 0; j < profile.jumps(); ++j) {
    const double b = profile.breakpoints[j];
    if (b > lo && b < hi) pts.push_back(b);
  }
  std::sort(pts.begin(), pts.end());
  // Drop duplicates and near-coincident points created by the insertion.
  const double tiny = 1e-12 * (hi - lo);
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts) {
    if (!out.empty() && p - out.back() <= tiny) {
      // Keep breakpoints exact: replace a plain grid point if the breakpoint
      // comes second in sorted order.
      continue;
    }
    out.push_back(p);
  }
  // Snap grid points that nearly coincide with breakpoints onto them.
  for (int j = 0; j < profile.jumps(); ++j) {
    const double b = profile.breakpoints[j];
    if (b <= lo || b >= hi) continue;
    auto it = std::lower_bound(out.begin(), out.end(), b - tiny);
    if (it != out.end() && std::abs(*it - b) <= tiny) *it = b;
  }
  return Eigen::Map<Eigen::VectorXd>(out.data(), out.size());
}

bool is_breakpoint_aligned(const Eigen::VectorXd& x,
                           const BandwidthProfile& profile, double tol) {
  if (x.size() == 0) return true;
  for (int j = 0; j < profile.jumps(); ++j) {
    const double b = profile.breakpoints[j];
    if (b < x[0] || b > x[x.size() - 1]) continue;
    const double* begin = x.data();
    const double* end = begin + x.size();
    auto it = std::lower_bound(begin, end, b - tol);
    if (it == end || std::abs(*it - b) > tol) return false;
  }
  return true;
}

}  // namespace varbw
