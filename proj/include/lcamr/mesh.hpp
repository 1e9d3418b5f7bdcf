#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace lcamr {

struct BoundingBox {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
};

// One cell of the refinement forest. Cells are never removed; refinement
// appends children and the parent stops being a leaf. (gx, gy) are integer
// cell coordinates within the level's virtual nx*2^level x ny*2^level grid.
struct Cell {
  int32_t id = -1;
  int32_t level = 0;
  int64_t gx = 0, gy = 0;
  int32_t parent = -1;
  std::array<int32_t, 4> children{-1, -1, -1, -1};  // SW, SE, NW, NE

  bool is_leaf() const { return children[0] < 0; }
};

enum class EdgeKind { boundary, conforming, hanging };

// Interior edges carry a fixed orientation: the unit normal points along +x
// for vertical edges and +y for horizontal ones; on the domain boundary the
// normal is outward and `orientation` records its sign along the axis.
// A hanging record covers one fine sub-edge of the coarse cell's face, so a
// coarse face split in two produces two records. `cells` holds the active
// cells on the {negative, positive} side of the normal; boundary edges leave
// the off-domain slot at -1.
struct Edge {
  EdgeKind kind = EdgeKind::boundary;
  bool vertical = true;
  int orientation = 1;
  std::array<int32_t, 2> cells{-1, -1};
  int coarse_side = -1;  // index into `cells` of the coarse cell, hanging only
  double p0[2] = {0, 0}, p1[2] = {0, 0};  // endpoints, ascending along the edge
  double length = 0.0;
};

struct Mesh {
  int nx = 1, ny = 1;
  BoundingBox domain;
  std::vector<Cell> cells;
  std::vector<int32_t> active;  // leaf ids, ascending

  const Cell& cell(int32_t id) const { return cells[id]; }
  int n_active() const { return static_cast<int>(active.size()); }
  int max_level() const;

  // -1 when no cell occupies (level, gx, gy).
  int32_t at(int level, int64_t gx, int64_t gy) const;
  bool in_level_grid(int level, int64_t gx, int64_t gy) const;

  void cell_box(int32_t id, double* x0, double* y0, double* hx,
                double* hy) const;

  std::unordered_map<uint64_t, int32_t> index;
};

Mesh uniform_mesh(int nx, int ny, BoundingBox box = {});

// Splits every marked leaf into four children, then restores 1-irregularity:
// active cells sharing an edge never differ by more than one level. The input
// mesh is left untouched. Marking a non-leaf or out-of-range id throws.
Mesh refine(const Mesh& mesh, const std::vector<int32_t>& marked);

// Every edge of the active mesh exactly once, in a deterministic order.
std::vector<Edge> active_edges(const Mesh& mesh);

// Cell diameter: length of the bounding-box diagonal.
double cell_size(const Mesh& mesh, int32_t id);

}  // namespace lcamr
