#include "lcamr/dofmap.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace lcamr {

namespace {

inline uint64_t pack_key(int64_t kx, int64_t ky) {
  assert(kx >= 0 && ky >= 0 && kx < (int64_t{1} << 31) && ky < (int64_t{1} << 31));
  return (static_cast<uint64_t>(kx) << 31) | static_cast<uint64_t>(ky);
}

// Lattice key of a cell-local node; the lattice refines the coarse grid by
// 2^scale so every node of every admissible level lands on integer coords.
inline std::array<int64_t, 2> local_node_key(const Cell& c, Degree d, int local,
                                             int scale) {
  const int n1 = node_count_1d(d);
  const int ix = local % n1;
  const int iy = local / n1;
  if (d == Degree::q2) {
    const int shift = scale - c.level - 1;
    assert(shift >= 0);
    return {(2 * c.gx + ix) << shift, (2 * c.gy + iy) << shift};
  }
  const int shift = scale - c.level;
  return {(c.gx + ix) << shift, (c.gy + iy) << shift};
}

struct NodeSet {
  std::vector<std::array<int64_t, 2>> keys;  // sorted by (ky, kx)
  std::vector<int32_t> cell_nodes;           // row * nb + local -> node index
};

NodeSet collect_nodes(const Mesh& mesh, Degree d, int scale) {
  const int nb = node_count(d);
  std::unordered_map<uint64_t, int32_t> seen;
  std::vector<std::array<int64_t, 2>> keys;
  std::vector<int32_t> cells(static_cast<size_t>(mesh.n_active()) * nb);
  for (int row = 0; row < mesh.n_active(); ++row) {
    const Cell& c = mesh.cells[mesh.active[row]];
    for (int k = 0; k < nb; ++k) {
      const auto key = local_node_key(c, d, k, scale);
      auto [it, inserted] =
          seen.emplace(pack_key(key[0], key[1]), static_cast<int32_t>(keys.size()));
      if (inserted) keys.push_back(key);
      cells[static_cast<size_t>(row) * nb + k] = it->second;
    }
  }
  // Renumber lexicographically by (y, x).
  std::vector<int32_t> order(keys.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int32_t>(i);
  std::sort(order.begin(), order.end(), [&keys](int32_t a, int32_t b) {
    return keys[a][1] != keys[b][1] ? keys[a][1] < keys[b][1]
                                    : keys[a][0] < keys[b][0];
  });
  std::vector<int32_t> rank(keys.size());
  for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int32_t>(i);

  NodeSet ns;
  ns.keys.resize(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) ns.keys[rank[i]] = keys[i];
  ns.cell_nodes.resize(cells.size());
  for (size_t i = 0; i < cells.size(); ++i) ns.cell_nodes[i] = rank[cells[i]];
  return ns;
}

}  // namespace

std::vector<Field> FieldSet::list() const {
  std::vector<Field> out;
  for (Field f : {Field::n1, Field::n2, Field::n3, Field::phi, Field::lambda})
    if (has(f)) out.push_back(f);
  return out;
}

std::array<double, 2> DofMap::node_pos(const std::array<int64_t, 2>& key,
                                       const BoundingBox& box) const {
  return {box.x0 + (box.x1 - box.x0) * (static_cast<double>(key[0]) / lattice_w),
          box.y0 + (box.y1 - box.y0) * (static_cast<double>(key[1]) / lattice_h)};
}

DofMap build_dofmap(const Mesh& mesh, FieldSet fields) {
  if (!fields.director && !fields.potential && !fields.multiplier)
    throw std::invalid_argument("build_dofmap: no fields requested");
  DofMap dm;
  dm.fields = fields;
  dm.scale = mesh.max_level() + 1;
  dm.lattice_w = static_cast<int64_t>(mesh.nx) << dm.scale;
  dm.lattice_h = static_cast<int64_t>(mesh.ny) << dm.scale;

  NodeSet q2 = collect_nodes(mesh, Degree::q2, dm.scale);
  dm.nq2 = static_cast<int64_t>(q2.keys.size());
  dm.q2_key = std::move(q2.keys);
  dm.cell_q2 = std::move(q2.cell_nodes);

  NodeSet q1 = collect_nodes(mesh, Degree::q1, dm.scale);
  dm.nq1 = static_cast<int64_t>(q1.keys.size());
  dm.q1_key = std::move(q1.keys);
  dm.cell_q1 = std::move(q1.cell_nodes);

  dm.row_of_cell.assign(mesh.cells.size(), -1);
  for (int row = 0; row < mesh.n_active(); ++row)
    dm.row_of_cell[mesh.active[row]] = row;

  int64_t at = 0;
  for (Field f : fields.list()) {
    dm.offset[static_cast<int>(f)] = at;
    at += dm.node_count_of(field_degree(f));
  }
  dm.total = at;
  return dm;
}

void ConstraintSet::add(LinearConstraint c) {
  auto [it, inserted] =
      lookup_.emplace(c.dof, static_cast<int32_t>(constraints_.size()));
  if (!inserted) return;  // same dof constrained twice (shared sub-edge corner)
  constraints_.push_back(std::move(c));
}

const LinearConstraint* ConstraintSet::get(int64_t dof) const {
  auto it = lookup_.find(dof);
  return it == lookup_.end() ? nullptr : &constraints_[it->second];
}

void ConstraintSet::finalize(int64_t total_dofs) {
  // Fold constrained masters away so every surviving master is a free dof.
  // With 1-irregular meshes only pinned masters actually occur.
  for (int pass = 0; pass < 32; ++pass) {
    bool changed = false;
    for (LinearConstraint& c : constraints_) {
      std::vector<std::pair<int64_t, double>> flat;
      flat.reserve(c.masters.size());
      for (auto& [m, w] : c.masters) {
        const LinearConstraint* mc = get(m);
        if (!mc) {
          flat.emplace_back(m, w);
          continue;
        }
        changed = true;
        c.inhomogeneity += w * mc->inhomogeneity;
        for (auto& [mm, ww] : mc->masters) flat.emplace_back(mm, w * ww);
      }
      c.masters = std::move(flat);
    }
    if (!changed) break;
    if (pass == 31)
      throw std::runtime_error("ConstraintSet: constraint chain does not resolve");
  }

  n_total_ = total_dofs;
  raw_to_reduced_.assign(total_dofs, -1);
  reduced_to_raw_.clear();
  reduced_to_raw_.reserve(total_dofs - static_cast<int64_t>(constraints_.size()));
  for (int64_t d = 0; d < total_dofs; ++d) {
    if (lookup_.count(d)) continue;
    raw_to_reduced_[d] = static_cast<int64_t>(reduced_to_raw_.size());
    reduced_to_raw_.push_back(d);
  }
  finalized_ = true;
}

void ConstraintSet::distribute(Eigen::VectorXd& raw) const {
  assert(finalized_);
  assert(raw.size() == n_total_);
  for (const LinearConstraint& c : constraints_) {
    double v = c.inhomogeneity;
    for (auto& [m, w] : c.masters) v += w * raw[m];
    raw[c.dof] = v;
  }
}

namespace {

// Nodes of `cell` lying on the lattice line {axis == kfix}, sorted by the
// transverse coordinate. Returns node indices into the degree's node set.
std::vector<std::pair<int64_t, int32_t>> face_nodes(const DofMap& dm,
                                                    const Mesh& mesh,
                                                    int32_t cell_id, Degree d,
                                                    int axis, int64_t kfix) {
  const int nb = node_count(d);
  const int row = dm.row_of_cell[cell_id];
  assert(row >= 0);
  const Cell& c = mesh.cells[cell_id];
  std::vector<std::pair<int64_t, int32_t>> out;
  for (int k = 0; k < nb; ++k) {
    const auto key = local_node_key(c, d, k, dm.scale);
    if (key[axis] != kfix) continue;
    const int32_t node = d == Degree::q2 ? dm.cell_q2[row * 9 + k]
                                         : dm.cell_q1[row * 4 + k];
    out.emplace_back(key[1 - axis], node);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ConstraintSet build_constraints(const Mesh& mesh, const DofMap& dm,
                                const std::vector<Edge>& edges,
                                const BoundaryValues& boundary) {
  ConstraintSet cs;

  std::vector<Degree> degrees{Degree::q2};
  if (dm.fields.multiplier) degrees.push_back(Degree::q1);

  for (const Edge& e : edges) {
    if (e.kind != EdgeKind::hanging) continue;
    const int32_t coarse = e.cells[e.coarse_side];
    const int32_t fine = e.cells[1 - e.coarse_side];
    const int axis = e.vertical ? 0 : 1;
    const Cell& fc = mesh.cells[fine];
    // Lattice coordinate of the shared face, taken from the fine cell.
    const int shift = dm.scale - fc.level;
    const int64_t gfix = axis == 0 ? fc.gx : fc.gy;
    const bool fine_on_negative = e.coarse_side == 1;
    const int64_t face = (fine_on_negative ? gfix + 1 : gfix) << shift;

    for (Degree d : degrees) {
      auto cn = face_nodes(dm, mesh, coarse, d, axis, face);
      auto fn = face_nodes(dm, mesh, fine, d, axis, face);
      assert(cn.size() == static_cast<size_t>(node_count_1d(d)));
      const int64_t span0 = cn.front().first;
      const int64_t span = cn.back().first - span0;
      for (auto& [trans, node] : fn) {
        bool shared = false;
        for (auto& [ct, cnode] : cn)
          if (ct == trans) {
            assert(cnode == node);
            shared = true;
            break;
          }
        if (shared) continue;
        const double t = static_cast<double>(trans - span0) / span;
        double w[3];
        line_values(d == Degree::q1 ? Degree::q1 : Degree::q2, t, w);
        for (Field f : dm.fields.list()) {
          if (field_degree(f) != d) continue;
          LinearConstraint lc;
          lc.dof = dm.dof(f, node);
          for (int m = 0; m < node_count_1d(d); ++m)
            lc.masters.emplace_back(dm.dof(f, cn[m].second), w[m]);
          cs.add(std::move(lc));
        }
      }
    }
  }

  // Dirichlet pins. Hanging nodes never sit on the boundary of a rectangle,
  // so pins and hanging constraints target disjoint dofs.
  if (boundary.director && dm.fields.director) {
    for (int64_t node = 0; node < dm.nq2; ++node) {
      if (!dm.node_on_boundary(dm.q2_key[node])) continue;
      const auto pos = dm.node_pos(dm.q2_key[node], mesh.domain);
      const auto g = boundary.director(pos[0], pos[1]);
      for (int comp = 0; comp < 3; ++comp) {
        LinearConstraint lc;
        lc.dof = dm.dof(static_cast<Field>(comp), node);
        lc.inhomogeneity = g[comp];
        assert(!cs.is_constrained(lc.dof));
        cs.add(std::move(lc));
      }
    }
  }
  if (boundary.potential && dm.fields.potential) {
    for (int64_t node = 0; node < dm.nq2; ++node) {
      if (!dm.node_on_boundary(dm.q2_key[node])) continue;
      const auto pos = dm.node_pos(dm.q2_key[node], mesh.domain);
      LinearConstraint lc;
      lc.dof = dm.dof(Field::phi, node);
      lc.inhomogeneity = boundary.potential(pos[0], pos[1]);
      assert(!cs.is_constrained(lc.dof));
      cs.add(std::move(lc));
    }
  }

  cs.finalize(dm.total);
  return cs;
}

int32_t locate_cell(const Mesh& mesh, double x, double y) {
  const BoundingBox& b = mesh.domain;
  auto clampi = [](int64_t v, int64_t hi) { return std::max<int64_t>(0, std::min(v, hi)); };
  const int64_t i = clampi(static_cast<int64_t>((x - b.x0) / (b.x1 - b.x0) * mesh.nx), mesh.nx - 1);
  const int64_t j = clampi(static_cast<int64_t>((y - b.y0) / (b.y1 - b.y0) * mesh.ny), mesh.ny - 1);
  int32_t id = static_cast<int32_t>(j * mesh.nx + i);
  while (!mesh.cells[id].is_leaf()) {
    double x0, y0, hx, hy;
    mesh.cell_box(id, &x0, &y0, &hx, &hy);
    const int slot = (x >= x0 + 0.5 * hx ? 1 : 0) + (y >= y0 + 0.5 * hy ? 2 : 0);
    id = mesh.cells[id].children[slot];
  }
  return id;
}

double eval_field(const Mesh& mesh, const DofMap& dm,
                  const Eigen::VectorXd& raw, Field f, int32_t cell_id,
                  double x, double y) {
  const Degree d = field_degree(f);
  const int nb = node_count(d);
  const int row = dm.row_of_cell[cell_id];
  assert(row >= 0);
  double x0, y0, hx, hy;
  mesh.cell_box(cell_id, &x0, &y0, &hx, &hy);
  const double xr = std::clamp((x - x0) / hx, 0.0, 1.0);
  const double yr = std::clamp((y - y0) / hy, 0.0, 1.0);
  double values[9];
  eval_values(d, xr, yr, values);
  double out = 0.0;
  for (int k = 0; k < nb; ++k) {
    const int32_t node = d == Degree::q2 ? dm.cell_q2[row * 9 + k]
                                         : dm.cell_q1[row * 4 + k];
    out += values[k] * raw[dm.dof(f, node)];
  }
  return out;
}

Eigen::VectorXd transfer_state(const Mesh& coarse_mesh, const DofMap& coarse_dm,
                               const Eigen::VectorXd& coarse_raw,
                               const Mesh& fine_mesh, const DofMap& fine_dm) {
  assert(coarse_raw.size() == coarse_dm.total);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(fine_dm.total);
  for (Field f : fine_dm.fields.list()) {
    const Degree d = field_degree(f);
    const int64_t n = fine_dm.node_count_of(d);
    const auto& keys = d == Degree::q2 ? fine_dm.q2_key : fine_dm.q1_key;
    for (int64_t node = 0; node < n; ++node) {
      const auto pos = fine_dm.node_pos(keys[node], fine_mesh.domain);
      const int32_t cid = locate_cell(coarse_mesh, pos[0], pos[1]);
      out[fine_dm.dof(f, node)] =
          eval_field(coarse_mesh, coarse_dm, coarse_raw, f, cid, pos[0], pos[1]);
    }
  }
  return out;
}

}  // namespace lcamr
