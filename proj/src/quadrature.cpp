#include "varbw/quadrature.hpp"

#include <cmath>

#include "varbw/errors.hpp"

namespace varbw {

GaussLegendre GaussLegendre::rule(int n) {
  if (n < 1) raise(errc::index_out_of_range, "Gauss-Legendre order must be >= 1");
  GaussLegendre r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.weights[i] = w;
    r.nodes[n - 1 - i] = x;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

PanelRule composite_gauss_legendre(double a, double b, int panels,
                                   int nodes_per_panel) {
  if (panels < 1 || nodes_per_panel < 1)
    raise(errc::index_out_of_range, "composite rule needs panels >= 1, nodes >= 1");
  const GaussLegendre base = GaussLegendre::rule(nodes_per_panel);
  PanelRule out;
  out.nodes.resize(panels * nodes_per_panel);
  out.weights.resize(panels * nodes_per_panel);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int k = 0; k < nodes_per_panel; ++k) {
      out.nodes[p * nodes_per_panel + k] = mid + 0.5 * h * base.nodes[k];
      out.weights[p * nodes_per_panel + k] = 0.5 * h * base.weights[k];
    }
  }
  return out;
}

int oscillation_panels(double span, double max_rate, int min_panels) {
  const double periods = std::abs(span) * std::abs(max_rate) / (2.0 * M_PI);
  const int need = static_cast<int>(std::ceil(1.25 * periods));
  return std::max(min_panels, need);
}

}  // namespace varbw
