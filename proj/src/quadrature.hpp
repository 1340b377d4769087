#pragma once

#include <vector>

namespace platelab {

// Gauss-Legendre rule mapped to [0,1]; weights sum to 1.
struct QuadratureRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

// n-point rule, exact for polynomials of degree <= 2n-1. Valid for n >= 1.
QuadratureRule1D gauss_legendre(int n);

} // namespace platelab
