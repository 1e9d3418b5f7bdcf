#pragma once

#include <functional>
#include <string>

#include "lcamr/estimator.hpp"
#include "lcamr/marking.hpp"
#include "lcamr/problems.hpp"

namespace lcamr {

struct NewtonOptions {
  double tol = 1e-4;  // l2 norm of the condensed residual
  int max_iters = 50;
  double alpha = 1.0;  // fixed update damping
};

struct NewtonResult {
  int iterations = 0;  // executed update steps
  double final_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // norm before each step, then final
  std::vector<int64_t> nnz_history;      // Hessian nonzeros per step
};

// Damped Newton on the condensed system: solve H delta = -r, update raw
// unknowns by alpha * delta, redistribute constraints. The state must
// arrive with constraints distributed. Throws only on linear-solver
// failure; non-convergence is reported in the result.
NewtonResult newton_solve(FieldState& st, const NewtonOptions& opt,
                          bool parallel = true);

struct NIOptions {
  int nx = 32, ny = 32;  // coarse grid
  int levels = 3;        // grids in the hierarchy, coarsest included
  bool uniform = false;  // refine every cell instead of marking
  Marking marking = Marking::dorfler;
  double nu = 0.9;
  double tol = 1e-4;
  int max_iters = 50;
  int quad_points = 5;
  bool count_only = false;   // sizes only, no solves; requires uniform
  int64_t max_raw_dofs = 0;  // >0: a level passing this bound becomes last
  bool parallel = true;
};

struct LevelReport {
  int level = 0;
  int64_t raw_dofs = 0;
  int64_t reduced_dofs = 0;
  int active_cells = 0;
  double alpha = 0.0;
  int newton_iters = 0;
  double final_residual = 0.0;
  bool converged = false;
  double energy = 0.0;    // equilibrium energy, no unit-length device
  double estimate = 0.0;  // global estimator
  double h1 = -1.0;       // global H1 error; negative when unavailable
  double gauss = -1.0;    // Gauss conformance; negative when unavailable
  double dev_above = 0.0, dev_below = 0.0;
  double wall_seconds = 0.0;
  std::vector<int64_t> newton_nnz;
  std::vector<double> residual_history;
  std::vector<LocalEstimate> locals;  // per-cell breakdown, row order
  std::vector<double> h1_cells2;      // squared per-cell error, if exact
};

// Self-owning snapshot of a discrete configuration.
struct LevelData {
  Mesh mesh;
  DofMap dm;
  ConstraintSet cs;
  Eigen::VectorXd raw;
};

struct RunReport {
  std::vector<LevelReport> levels;
  WorkLedger ledger;
  bool failed = false;
  std::string failure;  // level-context message when failed
  bool has_final = false;
  LevelData final_state;  // last solved level, when has_final
};

FieldState state_view(const LevelData& data, const MaterialParams& params,
                      int quad_points);

// Called after each level's post-processing while its state is alive.
using LevelSink =
    std::function<void(const LevelReport&, const LevelData&, const Problem&)>;

// Nested iteration: solve, estimate, mark, refine, transfer. Level l uses
// damping min(0.2 (l+1), 1). Uniform mode refines every cell; count_only
// builds the hierarchy without solving. Solver failures and Newton
// non-convergence abort the run with the partial report retained.
RunReport nested_iteration(const Problem& prob, const NIOptions& opt,
                           const LevelSink& sink = {});

}  // namespace lcamr
