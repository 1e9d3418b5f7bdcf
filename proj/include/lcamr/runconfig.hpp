#pragma once

#include <array>
#include <map>
#include <string>

#include "lcamr/newton.hpp"

namespace lcamr {

// Parsed run description. Text format: flat key = value lines, # comments,
// optional [material] section holding parameter overrides. Unknown keys,
// malformed values, and constraint violations fail with the line number.
struct RunConfig {
  std::string problem = "elastic_benchmark";  // or "flexo"
  Formulation formulation = Formulation::penalty;
  bool uniform = false;  // refinement = uniform | amr
  Marking marking = Marking::dorfler;
  double nu = 0.9;
  int nx = 32, ny = 32;
  int levels = 3;
  double zeta = -1.0;  // negative until set; preset default by problem
  std::string out;     // artifact directory; empty writes nothing
  bool emit_vtk = false;
  bool dump_systems = false;  // final-level Hessian as Matrix Market
  int quad_points = 5;
  double tol = 1e-4;
  int max_newton = 50;
  bool count_only = false;
  int64_t max_dofs = 0;
  std::string initial_guess;  // "uniform" | "analytic"; default by problem
  std::array<double, 3> initial_director{0.0, 0.0, 1.0};
  std::map<std::string, double> material;  // [material] overrides
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);  // adds the file context

// Instantiate the experiment described by a validated config.
Problem make_problem(const RunConfig& cfg);
NIOptions make_ni_options(const RunConfig& cfg);

}  // namespace lcamr
