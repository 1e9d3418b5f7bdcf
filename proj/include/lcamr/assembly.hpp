#pragma once

#include <Eigen/Sparse>

#include "lcamr/dofmap.hpp"
#include "lcamr/mesh.hpp"
#include "lcamr/physics.hpp"

namespace lcamr {

using SparseMat = Eigen::SparseMatrix<double>;

// A discrete configuration: mesh, numbering, constraints, material data and
// the raw coefficient vector (constraints distributed).
struct FieldState {
  const Mesh* mesh = nullptr;
  const DofMap* dm = nullptr;
  const ConstraintSet* cs = nullptr;
  MaterialParams params;
  Eigen::VectorXd raw;
  int quad_points = 5;  // tensor Gauss points per direction
};

// Local dofs of one cell: every present field over its nodes, fields in
// storage order. Count is the same for every cell of a mesh.
int local_dof_count(const FieldSet& fields);

// Integral of the energy density; `augmented` includes the unit-length
// device. The parallel and serial paths reduce in the same order.
double assemble_energy(const FieldState& st, bool augmented,
                       bool parallel = true);

// First variation against the reduced (condensed) test space.
Eigen::VectorXd assemble_residual(const FieldState& st, bool parallel = true);

// Second variation on the reduced space. Symmetric by construction.
SparseMat assemble_hessian(const FieldState& st, bool parallel = true);

// Field values and first (optionally second) derivatives at a reference
// point of the active cell in row `row`.
PointState evaluate_state(const FieldState& st, int row, double xr, double yr,
                          bool second_derivs);

struct LinearSolveStats {
  double rel_residual = 0.0;
  bool refined = false;
};

// Sparse LU solve with one iterative-refinement pass when the relative
// residual exceeds 1e-10. Throws std::runtime_error if factorization fails.
Eigen::VectorXd solve_linear(const SparseMat& A, const Eigen::VectorXd& b,
                             LinearSolveStats* stats = nullptr);

}  // namespace lcamr
