#include "lcamr/estimator.hpp"

#include <stdexcept>

#include "lcamr/quadrature.hpp"

namespace lcamr {

namespace {

// Trace state of `cell` at a physical point on one of its faces.
PointState trace_state(const FieldState& st, int32_t cell_id, double x,
                       double y) {
  double x0, y0, hx, hy;
  st.mesh->cell_box(cell_id, &x0, &y0, &hx, &hy);
  const int row = st.dm->row_of_cell[cell_id];
  return evaluate_state(st, row, (x - x0) / hx, (y - y0) / hy, false);
}

double edge_term(const FieldState& st, const Edge& e,
                 const QuadratureRule1D& rule) {
  const Eigen::Vector3d normal =
      e.vertical ? Eigen::Vector3d{1, 0, 0} : Eigen::Vector3d{0, 1, 0};
  double acc = 0.0;
  for (size_t p = 0; p < rule.points.size(); ++p) {
    const double t = rule.points[p];
    const double x = e.p0[0] + t * (e.p1[0] - e.p0[0]);
    const double y = e.p0[1] + t * (e.p1[1] - e.p0[1]);
    const SideFlux neg =
        side_flux(st.params, trace_state(st, e.cells[0], x, y), normal);
    const SideFlux pos =
        side_flux(st.params, trace_state(st, e.cells[1], x, y), normal);
    double v = (neg.p_hat - pos.p_hat).squaredNorm();
    if (st.params.electric) {
      const double dq = neg.q_hat - pos.q_hat;
      v += dq * dq;
    }
    acc += rule.weights[p] * v;
  }
  const double integral = e.length * acc;
  return e.length * integral;  // h_E weight on the jump integral
}

}  // namespace

std::vector<LocalEstimate> local_estimates(const FieldState& st,
                                           bool parallel) {
  const Mesh& mesh = *st.mesh;
  const int nc = mesh.n_active();
  const bool lagrangian = st.params.formulation == Formulation::lagrangian;
  const QuadratureRule2D vol_rule = gauss_rule_2d(st.quad_points);
  const int np = static_cast<int>(vol_rule.size());
  std::vector<LocalEstimate> out(nc);

#pragma omp parallel for schedule(static) if (parallel)
  for (int row = 0; row < nc; ++row) {
    const int32_t id = mesh.active[row];
    double x0, y0, hx, hy;
    mesh.cell_box(id, &x0, &y0, &hx, &hy);
    const double det = hx * hy;
    double p2 = 0.0, q2 = 0.0, c2 = 0.0;
    for (int p = 0; p < np; ++p) {
      const PointState s =
          evaluate_state(st, row, vol_rule.x[p], vol_rule.y[p], true);
      const StrongResidual r = strong_residuals(st.params, s);
      const double w = vol_rule.weights[p] * det;
      p2 += w * r.p.squaredNorm();
      if (st.params.electric) q2 += w * r.q * r.q;
      if (lagrangian) {
        const double g = s.n.squaredNorm() - 1.0;
        c2 += w * g * g;
      }
    }
    const double h = cell_size(mesh, id);
    LocalEstimate& le = out[row];
    le.cell = id;
    le.vol_director = h * h * p2;
    le.vol_potential = h * h * q2;
    le.constraint = c2;
  }

  const std::vector<Edge> edges = active_edges(mesh);
  const QuadratureRule1D edge_rule = gauss_rule_1d(st.quad_points);
  const int ne = static_cast<int>(edges.size());
  std::vector<double> edge_values(ne, 0.0);

#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < ne; ++i) {
    if (edges[i].kind == EdgeKind::boundary) continue;
    edge_values[i] = edge_term(st, edges[i], edge_rule);
  }

  // Serial scatter: every interior edge feeds both adjacent cells.
  for (int i = 0; i < ne; ++i) {
    const Edge& e = edges[i];
    if (e.kind == EdgeKind::boundary) continue;
    for (int side = 0; side < 2; ++side)
      out[st.dm->row_of_cell[e.cells[side]]].edge += edge_values[i];
  }
  return out;
}

double global_estimate(const std::vector<LocalEstimate>& locals) {
  double sum = 0.0;
  for (const LocalEstimate& le : locals) sum += le.theta2();
  return std::sqrt(sum);
}

double gauss_conformance(const FieldState& st, bool parallel) {
  if (!st.params.electric)
    throw std::logic_error("gauss_conformance: state has no electric field");
  const Mesh& mesh = *st.mesh;
  const int nc = mesh.n_active();
  const QuadratureRule2D rule = gauss_rule_2d(st.quad_points);
  const int np = static_cast<int>(rule.size());
  std::vector<double> cell_values(nc);

#pragma omp parallel for schedule(static) if (parallel)
  for (int row = 0; row < nc; ++row) {
    double x0, y0, hx, hy;
    mesh.cell_box(mesh.active[row], &x0, &y0, &hx, &hy);
    const double det = hx * hy;
    double acc = 0.0;
    for (int p = 0; p < np; ++p) {
      const PointState s = evaluate_state(st, row, rule.x[p], rule.y[p], true);
      const double dd = displacement_divergence(st.params, s);
      acc += rule.weights[p] * det * dd * dd;
    }
    cell_values[row] = acc;
  }

  double total = 0.0;
  for (int row = 0; row < nc; ++row) total += cell_values[row];
  return total;
}

UnitDeviation unit_length_deviation(const FieldState& st, bool parallel) {
  const Mesh& mesh = *st.mesh;
  const int nc = mesh.n_active();
  const QuadratureRule2D rule = gauss_rule_2d(st.quad_points);
  const int np = static_cast<int>(rule.size());
  std::vector<double> above(nc, 0.0), below(nc, 0.0);

#pragma omp parallel for schedule(static) if (parallel)
  for (int row = 0; row < nc; ++row) {
    double a = 0.0, b = 0.0;
    for (int p = 0; p < np; ++p) {
      const PointState s = evaluate_state(st, row, rule.x[p], rule.y[p], false);
      const double dev = s.n.norm() - 1.0;
      a = std::max(a, dev);
      b = std::max(b, -dev);
    }
    above[row] = a;
    below[row] = b;
  }

  UnitDeviation d;
  for (int row = 0; row < nc; ++row) {
    d.above = std::max(d.above, above[row]);
    d.below = std::max(d.below, below[row]);
  }
  return d;
}

}  // namespace lcamr
