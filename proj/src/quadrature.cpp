#include "quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace platelab {

QuadratureRule1D gauss_legendre(int n) {
  if (n < 1)
    throw std::invalid_argument("gauss_legendre: point count must be >= 1");

  QuadratureRule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);

  // Roots of P_n on [-1,1] by Newton iteration, seeded with the Chebyshev
  // estimate; only the lower half is computed, the rest follows by symmetry.
  for (int i = 0; i < (n + 1) / 2; ++i) {
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
      if (std::abs(dx) < 1e-15)
        break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map from [-1,1] to [0,1]
    rule.points[i] = 0.5 * (1.0 - x);
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

} // namespace platelab
