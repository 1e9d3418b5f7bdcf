#pragma once

#include <array>
#include <vector>

namespace lcamr {

// Tensor-product Lagrange elements on the reference square [0,1]^2.
// Local nodes are ordered lexicographically, x fastest, with 1D nodes
// sorted by coordinate: Q1 uses {0,1}, Q2 uses {0, 1/2, 1}.
enum class Degree { q1 = 1, q2 = 2 };

constexpr int node_count(Degree d) { return d == Degree::q1 ? 4 : 9; }
constexpr int node_count_1d(Degree d) { return d == Degree::q1 ? 2 : 3; }

std::array<double, 2> node_position(Degree d, int local_node);

// 1D trace basis on [0,1], nodes ordered by coordinate; used for edge
// interpolation (hanging-node weights). out has node_count_1d entries.
void line_values(Degree d, double t, double* out);

// values must have room for node_count(d) entries.
void eval_values(Degree d, double x, double y, double* values);
// grads: node_count(d) pairs (d/dx, d/dy) in reference coordinates.
void eval_gradients(Degree d, double x, double y, double (*grads)[2]);
// hess: node_count(d) triples (dxx, dxy, dyy) in reference coordinates.
void eval_hessians(Degree d, double x, double y, double (*hess)[3]);

// Basis evaluated at a fixed set of reference points, laid out so the
// inner assembly loops stride over nodes: entry [p * nb + k] refers to
// point p and local node k.
struct ShapeTable {
  Degree degree;
  int nb = 0;
  int npoints = 0;
  std::vector<double> value, dx, dy, dxx, dxy, dyy;

  const double* value_at(int p) const { return value.data() + p * nb; }
  const double* dx_at(int p) const { return dx.data() + p * nb; }
  const double* dy_at(int p) const { return dy.data() + p * nb; }
};

ShapeTable tabulate_basis(Degree d, const std::vector<double>& x,
                          const std::vector<double>& y);

}  // namespace lcamr
