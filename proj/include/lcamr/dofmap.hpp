#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "lcamr/basis.hpp"
#include "lcamr/mesh.hpp"

namespace lcamr {

// Scalar unknown fields, in storage order. Director components and the
// potential use Q2 nodes, the multiplier uses Q1 nodes.
enum class Field : int { n1 = 0, n2 = 1, n3 = 2, phi = 3, lambda = 4 };

struct FieldSet {
  bool director = true;
  bool potential = false;
  bool multiplier = false;

  bool has(Field f) const {
    switch (f) {
      case Field::phi: return potential;
      case Field::lambda: return multiplier;
      default: return director;
    }
  }
  std::vector<Field> list() const;
};

constexpr Degree field_degree(Field f) {
  return f == Field::lambda ? Degree::q1 : Degree::q2;
}

// Numbers the nodes of the active mesh. Nodes live on an integer lattice
// refining the coarse grid by 2^scale per direction, which keeps node
// identification across cells and levels exact. Scalar node numbering is
// lexicographic by (y, x); a field's dof is its offset plus the node index.
struct DofMap {
  FieldSet fields;
  int scale = 1;
  int64_t lattice_w = 0, lattice_h = 0;

  int64_t nq2 = 0;
  std::vector<std::array<int64_t, 2>> q2_key;  // node -> (kx, ky)
  std::vector<int32_t> cell_q2;                // row * 9 + local -> node

  int64_t nq1 = 0;
  std::vector<std::array<int64_t, 2>> q1_key;
  std::vector<int32_t> cell_q1;                // row * 4 + local -> node

  std::vector<int32_t> row_of_cell;  // cell id -> active row, -1 if not a leaf
  std::array<int64_t, 5> offset{-1, -1, -1, -1, -1};
  int64_t total = 0;

  int64_t node_count_of(Degree d) const { return d == Degree::q1 ? nq1 : nq2; }
  int64_t dof(Field f, int64_t node) const {
    return offset[static_cast<int>(f)] + node;
  }
  bool node_on_boundary(const std::array<int64_t, 2>& key) const {
    return key[0] == 0 || key[0] == lattice_w || key[1] == 0 ||
           key[1] == lattice_h;
  }
  // Exact on the domain walls: lattice extremes map to the exact bounds.
  std::array<double, 2> node_pos(const std::array<int64_t, 2>& key,
                                 const BoundingBox& box) const;
};

DofMap build_dofmap(const Mesh& mesh, FieldSet fields);

// Dirichlet data; a null function leaves the corresponding field unpinned.
// Functions are evaluated at node positions, with wall coordinates exact.
struct BoundaryValues {
  std::function<std::array<double, 3>(double, double)> director;
  std::function<double(double, double)> potential;
};

// One dof written as an affine combination of unconstrained dofs.
// No masters means a pinned (Dirichlet) value.
struct LinearConstraint {
  int64_t dof = -1;
  double inhomogeneity = 0.0;
  std::vector<std::pair<int64_t, double>> masters;
};

class ConstraintSet {
 public:
  void add(LinearConstraint c);
  // Resolves chained masters and builds the condensed numbering.
  void finalize(int64_t total_dofs);

  bool is_constrained(int64_t dof) const { return lookup_.count(dof) > 0; }
  const LinearConstraint* get(int64_t dof) const;
  const std::vector<LinearConstraint>& all() const { return constraints_; }

  int64_t n_total() const { return n_total_; }
  int64_t n_reduced() const { return reduced_to_raw_.size(); }
  int64_t reduced_index(int64_t dof) const { return raw_to_reduced_[dof]; }
  int64_t raw_index(int64_t reduced) const { return reduced_to_raw_[reduced]; }

  // Overwrites constrained entries of a raw coefficient vector with the
  // values implied by their masters.
  void distribute(Eigen::VectorXd& raw) const;

 private:
  std::unordered_map<int64_t, int32_t> lookup_;
  std::vector<LinearConstraint> constraints_;
  std::vector<int64_t> raw_to_reduced_;
  std::vector<int64_t> reduced_to_raw_;
  int64_t n_total_ = 0;
  bool finalized_ = false;
};

// Hanging-node continuity constraints plus Dirichlet pins for all present
// fields with boundary data. The edge list must come from active_edges(mesh).
ConstraintSet build_constraints(const Mesh& mesh, const DofMap& dm,
                                const std::vector<Edge>& edges,
                                const BoundaryValues& boundary);

// Interpolates every present field of a raw coarse vector onto the nodes of
// a finer (nested) mesh. The coarse vector must have its constraints
// distributed; fine constraints are the caller's to re-apply.
Eigen::VectorXd transfer_state(const Mesh& coarse_mesh, const DofMap& coarse_dm,
                               const Eigen::VectorXd& coarse_raw,
                               const Mesh& fine_mesh, const DofMap& fine_dm);

// Active cell containing (x, y); points on shared faces resolve to one of
// the adjacent cells.
int32_t locate_cell(const Mesh& mesh, double x, double y);

// Scalar field value at a physical point inside the given active cell.
double eval_field(const Mesh& mesh, const DofMap& dm,
                  const Eigen::VectorXd& raw, Field f, int32_t cell_id,
                  double x, double y);

}  // namespace lcamr
