#pragma once

#include <functional>
#include <string>

#include "lcamr/assembly.hpp"

namespace lcamr {

// A complete experiment definition: material data, unknown fields, Dirichlet
// data, the coarse-level initial iterate, and (when known) the exact
// solution for error evaluation.
struct Problem {
  std::string name;
  MaterialParams params;
  FieldSet fields;
  BoundaryValues boundary;
  std::function<std::array<double, 3>(double, double)> initial_director;
  std::function<double(double, double)> initial_potential;  // null -> 0

  bool has_exact = false;
  std::function<Eigen::Vector3d(double, double)> exact_director;
  std::function<Eigen::Matrix<double, 3, 2>(double, double)> exact_gradient;
  double exact_energy = 0.0;
};

// In-plane spiral about (0.5, -0.1): n = (sin t, cos t, 0) with
// t = -4.5 log10(r). Unit length everywhere away from the center, which
// lies outside the unit-square domain.
Eigen::Vector3d benchmark_director(double x, double y);
Eigen::Matrix<double, 3, 2> benchmark_director_gradient(double x, double y);

// Equal elastic constants, no electric field, Dirichlet data and exact
// solution from benchmark_director. `analytic_initial` starts the coarse
// level at the interpolated exact solution instead of a uniform director.
Problem elastic_benchmark_problem(Formulation f, double zeta,
                                  bool analytic_initial = true);

// 5CB parameters with flexoelectric coupling. The potential boundary value
// is a smoothed square pulse of height 1.5 on the top wall:
//   g2(x) = 1.5 * 0.5 * (tanh(s(x - 1/3)) - tanh(s(x - 2/3))), s = 40.
// Director data is (0,0,1) on the whole boundary.
Problem flexo_problem(Formulation f, double zeta);

struct H1Error {
  std::vector<double> cell2;  // squared per-cell contributions, row order
  double global = 0.0;        // sqrt of the sum
};
// Director H1 error against the problem's exact solution; throws
// std::logic_error without one.
H1Error h1_error(const FieldState& st, const Problem& prob,
                 bool parallel = true);

// Cumulative share of the total held by the largest contributions: point k
// (0-based) is ((k+1)/m, sum of the k+1 largest / total). Input must be
// nonnegative with a positive total.
struct DistributionCurve {
  std::vector<double> frac_cells;
  std::vector<double> frac_total;
  // Trapezoid area under the polyline from (0,0) through the points.
  double area() const;
};
DistributionCurve distribution_curve(const std::vector<double>& values);

// Per-level estimate/error ratios; sizes must match, errors positive.
std::vector<double> effectivity(const std::vector<double>& estimates,
                                const std::vector<double>& errors);

}  // namespace lcamr
