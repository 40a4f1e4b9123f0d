#include "kpi/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "kpi/errors.hpp"

namespace kpi {

std::vector<QuadratureNode> composite_gauss_legendre(double a, double b, int panels) {
  if (panels < 1) throw ParameterError("quadrature needs at least one panel");
  if (!(b > a)) throw ParameterError("quadrature interval must be nonempty");
  using rule = boost::math::quadrature::gauss<double, 16>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();
  std::vector<QuadratureNode> nodes;
  nodes.reserve(static_cast<std::size_t>(panels) * 16);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    const double half = 0.5 * width;
    // Boost stores the nonnegative half of a symmetric rule.
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      const double x = abscissa[i];
      const double w = weights[i] * half;
      if (x == 0.0) {
        nodes.push_back({mid, w});
      } else {
        nodes.push_back({mid - half * x, w});
        nodes.push_back({mid + half * x, w});
      }
    }
  }
  return nodes;
}

int panels_for_spread(double spread, double horizon, double max_phase, int min_panels) {
  const double need = std::ceil(std::abs(spread) * horizon / (2.0 * max_phase));
  return std::max(min_panels, static_cast<int>(std::min(need, 1e8)));
}

}  // namespace kpi
