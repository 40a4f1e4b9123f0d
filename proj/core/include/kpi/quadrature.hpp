#pragma once

#include <vector>

namespace kpi {

struct QuadratureNode {
  double t;
  double w;
};

/// Composite 16-point Gauss-Legendre rule on [a, b] with `panels` equal panels.
std::vector<QuadratureNode> composite_gauss_legendre(double a, double b, int panels);

/// Panel count so that the largest phase rate `spread` turns through at most
/// `max_phase` radians per half panel. At least `min_panels`.
int panels_for_spread(double spread, double horizon, double max_phase = 4.0,
                      int min_panels = 4);

}  // namespace kpi
