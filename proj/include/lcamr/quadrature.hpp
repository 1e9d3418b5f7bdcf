#pragma once

#include <vector>

namespace lcamr {

// Gauss-Legendre rule mapped to [0,1]. Exact for polynomials of degree
// 2*npoints - 1 per coordinate direction.
struct QuadratureRule1D {
  std::vector<double> points;
  std::vector<double> weights;
};

// npoints must lie in [1,6]; anything else throws std::invalid_argument.
QuadratureRule1D gauss_rule_1d(int npoints);

// Tensor-product rule on the reference square [0,1]^2.
struct QuadratureRule2D {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

QuadratureRule2D gauss_rule_2d(int npoints_per_direction);

}  // namespace lcamr
