#pragma once

#include <Eigen/Core>

namespace varbw {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  /// Nodes and weights for an n-point rule, computed by Newton iteration on
  /// the Legendre recurrence.
  static GaussLegendre rule(int n);
};

/// Composite rule: `panels` equal subdivisions of [a, b], each carrying an
/// n-point Gauss-Legendre rule. Nodes ascend across the whole interval.
struct PanelRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

PanelRule composite_gauss_legendre(double a, double b, int panels,
                                   int nodes_per_panel);

/// Knobs for the oscillatory spectral quadratures. `nodes_per_panel` with the
/// panel heuristic below keeps at least ~10 nodes per oscillation period.
struct QuadratureConfig {
  int nodes_per_panel = 10;
  int min_panels = 8;
};

/// Panel count for integrating e^{i w z} over an interval of length `span`
/// when the phase rate |w| is at most `max_rate`.
int oscillation_panels(double span, double max_rate, int min_panels = 8);

}  // namespace varbw
