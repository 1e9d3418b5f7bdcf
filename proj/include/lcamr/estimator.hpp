#pragma once

#include <cmath>
#include <vector>

#include "lcamr/assembly.hpp"

namespace lcamr {

// Squared indicator parts of one active cell. Interior edges contribute
// their full value to both adjacent cells; boundary edges contribute
// nothing. The constraint part is used by the multiplier formulation only.
struct LocalEstimate {
  int32_t cell = -1;
  double vol_director = 0.0;   // h_T^2 ||p||^2 over T
  double vol_potential = 0.0;  // h_T^2 ||q||^2 over T
  double edge = 0.0;           // sum of h_E (||[p_hat]||^2 + ||[q_hat]||^2)
  double constraint = 0.0;     // ||n.n - 1||^2 over T

  double theta2() const {
    return vol_director + vol_potential + edge + constraint;
  }
  double theta() const { return std::sqrt(theta2()); }
};

// Indicators for every active cell, in active (row) order. Volume terms use
// the state's tensor quadrature; edge terms use the matching 1D rule on
// each edge, with hanging faces integrated per fine sub-edge and the coarse
// trace evaluated at the same physical points.
std::vector<LocalEstimate> local_estimates(const FieldState& st,
                                           bool parallel = true);

// sqrt of the sum of all theta2 values.
double global_estimate(const std::vector<LocalEstimate>& locals);

// Sum over cells of the integral of (div D)^2. Throws std::logic_error when
// the state has no electric field.
double gauss_conformance(const FieldState& st, bool parallel = true);

// Largest |n| - 1 excursions above and below unit length over all
// quadrature points, reported as nonnegative magnitudes.
struct UnitDeviation {
  double above = 0.0;
  double below = 0.0;
};
UnitDeviation unit_length_deviation(const FieldState& st, bool parallel = true);

}  // namespace lcamr
