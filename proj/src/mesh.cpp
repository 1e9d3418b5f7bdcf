#include "lcamr/mesh.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace lcamr {

namespace {

constexpr int kMaxLevel = 28;

inline uint64_t cell_key(int level, int64_t gx, int64_t gy) {
  return (static_cast<uint64_t>(level) << 58) |
         (static_cast<uint64_t>(gx) << 29) | static_cast<uint64_t>(gy);
}

// Child slots adjacent to a side of their parent. Sides: 0 left, 1 right,
// 2 bottom, 3 top; children: 0 SW, 1 SE, 2 NW, 3 NE.
constexpr int side_children[4][2] = {{0, 2}, {1, 3}, {0, 1}, {2, 3}};

constexpr int opposite_side[4] = {1, 0, 3, 2};

inline void side_offset(int side, int64_t* dx, int64_t* dy) {
  *dx = side == 0 ? -1 : side == 1 ? 1 : 0;
  *dy = side == 2 ? -1 : side == 3 ? 1 : 0;
}

void rebuild_active(Mesh& m) {
  m.active.clear();
  for (const Cell& c : m.cells)
    if (c.is_leaf()) m.active.push_back(c.id);
}

void split(Mesh& m, int32_t id) {
  Cell& parent = m.cells[id];
  if (parent.level + 1 > kMaxLevel)
    throw std::runtime_error("refine: exceeded maximum refinement depth");
  const int32_t base = static_cast<int32_t>(m.cells.size());
  const int level = parent.level + 1;
  const int64_t gx = 2 * parent.gx, gy = 2 * parent.gy;
  for (int k = 0; k < 4; ++k) {
    Cell child;
    child.id = base + k;
    child.level = level;
    child.gx = gx + (k & 1);
    child.gy = gy + (k >> 1);
    child.parent = id;
    m.cells[id].children[k] = child.id;
    m.index.emplace(cell_key(level, child.gx, child.gy), child.id);
    m.cells.push_back(child);
  }
}

}  // namespace

int Mesh::max_level() const {
  int lvl = 0;
  for (int32_t id : active) lvl = std::max(lvl, cells[id].level);
  return lvl;
}

bool Mesh::in_level_grid(int level, int64_t gx, int64_t gy) const {
  const int64_t w = static_cast<int64_t>(nx) << level;
  const int64_t h = static_cast<int64_t>(ny) << level;
  return gx >= 0 && gy >= 0 && gx < w && gy < h;
}

int32_t Mesh::at(int level, int64_t gx, int64_t gy) const {
  auto it = index.find(cell_key(level, gx, gy));
  return it == index.end() ? -1 : it->second;
}

void Mesh::cell_box(int32_t id, double* x0, double* y0, double* hx,
                    double* hy) const {
  const Cell& c = cells[id];
  const double sx = (domain.x1 - domain.x0) / (static_cast<double>(nx) * (1 << c.level));
  const double sy = (domain.y1 - domain.y0) / (static_cast<double>(ny) * (1 << c.level));
  *x0 = domain.x0 + c.gx * sx;
  *y0 = domain.y0 + c.gy * sy;
  *hx = sx;
  *hy = sy;
}

Mesh uniform_mesh(int nx, int ny, BoundingBox box) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("uniform_mesh: subdivision counts must be positive, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
  if (!(box.x1 > box.x0) || !(box.y1 > box.y0))
    throw std::invalid_argument("uniform_mesh: empty bounding box");
  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.domain = box;
  m.cells.reserve(static_cast<size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Cell c;
      c.id = static_cast<int32_t>(m.cells.size());
      c.gx = i;
      c.gy = j;
      m.index.emplace(cell_key(0, i, j), c.id);
      m.cells.push_back(c);
    }
  rebuild_active(m);
  return m;
}

Mesh refine(const Mesh& mesh, const std::vector<int32_t>& marked) {
  Mesh m = mesh;
  std::set<int32_t> to_split(marked.begin(), marked.end());
  for (int32_t id : to_split) {
    if (id < 0 || id >= static_cast<int32_t>(m.cells.size()))
      throw std::invalid_argument("refine: cell id " + std::to_string(id) +
                                  " out of range");
    if (!m.cells[id].is_leaf())
      throw std::invalid_argument("refine: cell " + std::to_string(id) +
                                  " is not active");
  }
  for (int32_t id : to_split) split(m, id);

  // Closure: a leaf with an active neighbor two or more levels finer across
  // one of its edges gets split as well. A neighbor that much finer shows up
  // as a refined child of the refined same-level neighbor.
  for (;;) {
    std::vector<int32_t> violations;
    for (const Cell& c : m.cells) {
      if (!c.is_leaf()) continue;
      bool bad = false;
      for (int side = 0; side < 4 && !bad; ++side) {
        int64_t dx, dy;
        side_offset(side, &dx, &dy);
        if (!m.in_level_grid(c.level, c.gx + dx, c.gy + dy)) continue;
        const int32_t nid = m.at(c.level, c.gx + dx, c.gy + dy);
        if (nid < 0 || m.cells[nid].is_leaf()) continue;
        for (int slot : side_children[opposite_side[side]])
          if (!m.cells[m.cells[nid].children[slot]].is_leaf()) {
            bad = true;
            break;
          }
      }
      if (bad) violations.push_back(c.id);
    }
    if (violations.empty()) break;
    for (int32_t id : violations)
      if (m.cells[id].is_leaf()) split(m, id);
  }
  rebuild_active(m);
  return m;
}

std::vector<Edge> active_edges(const Mesh& mesh) {
  std::vector<Edge> edges;

  auto face_geometry = [&mesh](int32_t id, int side, Edge* e) {
    double x0, y0, hx, hy;
    mesh.cell_box(id, &x0, &y0, &hx, &hy);
    e->vertical = side < 2;
    if (side == 0 || side == 1) {
      const double x = side == 0 ? x0 : x0 + hx;
      e->p0[0] = e->p1[0] = x;
      e->p0[1] = y0;
      e->p1[1] = y0 + hy;
      e->length = hy;
    } else {
      const double y = side == 2 ? y0 : y0 + hy;
      e->p0[1] = e->p1[1] = y;
      e->p0[0] = x0;
      e->p1[0] = x0 + hx;
      e->length = hx;
    }
  };

  for (const int32_t id : mesh.active) {
    const Cell& c = mesh.cells[id];
    for (int side = 0; side < 4; ++side) {
      int64_t dx, dy;
      side_offset(side, &dx, &dy);
      if (!mesh.in_level_grid(c.level, c.gx + dx, c.gy + dy)) {
        Edge e;
        e.kind = EdgeKind::boundary;
        face_geometry(id, side, &e);
        e.orientation = (side == 0 || side == 2) ? -1 : 1;
        e.cells = {id, -1};
        edges.push_back(e);
        continue;
      }
      const int32_t nid = mesh.at(c.level, c.gx + dx, c.gy + dy);
      if (nid >= 0 && mesh.cells[nid].is_leaf()) {
        if (side == 1 || side == 3) {  // one emission per conforming pair
          Edge e;
          e.kind = EdgeKind::conforming;
          face_geometry(id, side, &e);
          e.cells = {id, nid};
          edges.push_back(e);
        }
        continue;
      }
      if (nid >= 0) {
        // Same-level neighbor is refined: this cell is the coarse side of
        // two hanging sub-edges. 1-irregularity keeps those children leaves.
        for (int slot : side_children[opposite_side[side]]) {
          const int32_t fine = mesh.cells[nid].children[slot];
          assert(mesh.cells[fine].is_leaf());
          Edge e;
          e.kind = EdgeKind::hanging;
          face_geometry(fine, opposite_side[side], &e);
          if (side == 1 || side == 3) {
            e.cells = {id, fine};
            e.coarse_side = 0;
          } else {
            e.cells = {fine, id};
            e.coarse_side = 1;
          }
          edges.push_back(e);
        }
      }
      // nid < 0: the neighbor is coarser and emits the hanging records.
    }
  }
  return edges;
}

double cell_size(const Mesh& mesh, int32_t id) {
  double x0, y0, hx, hy;
  mesh.cell_box(id, &x0, &y0, &hx, &hy);
  return std::hypot(hx, hy);
}

}  // namespace lcamr
