#include "lcamr/assembly.hpp"

#include <cassert>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseLU>

#include "lcamr/quadrature.hpp"

namespace lcamr {

namespace {

struct Tables {
  int np = 0;
  std::vector<double> weight;  // reference weights, sum 1
  ShapeTable q2, q1;
};

Tables make_tables(int quad_points) {
  QuadratureRule2D r = gauss_rule_2d(quad_points);
  Tables t;
  t.np = static_cast<int>(r.size());
  t.weight = r.weights;
  t.q2 = tabulate_basis(Degree::q2, r.x, r.y);
  t.q1 = tabulate_basis(Degree::q1, r.x, r.y);
  return t;
}

struct LocalCoeffs {
  double n[3][9] = {};
  double phi[9] = {};
  double lam[4] = {};
};

void gather(const FieldState& st, int row, LocalCoeffs& lc) {
  const DofMap& dm = *st.dm;
  const int32_t* q2 = dm.cell_q2.data() + static_cast<size_t>(row) * 9;
  if (dm.fields.director)
    for (int comp = 0; comp < 3; ++comp)
      for (int k = 0; k < 9; ++k)
        lc.n[comp][k] = st.raw[dm.dof(static_cast<Field>(comp), q2[k])];
  if (dm.fields.potential)
    for (int k = 0; k < 9; ++k) lc.phi[k] = st.raw[dm.dof(Field::phi, q2[k])];
  if (dm.fields.multiplier) {
    const int32_t* q1 = dm.cell_q1.data() + static_cast<size_t>(row) * 4;
    for (int k = 0; k < 4; ++k) lc.lam[k] = st.raw[dm.dof(Field::lambda, q1[k])];
  }
}

// First-derivative state at tabulated point p; physical derivatives use the
// axis-aligned cell map with scales (inv_hx, inv_hy).
void state_at(const Tables& t, const FieldSet& fields, const LocalCoeffs& lc,
              int p, double inv_hx, double inv_hy, PointState& s) {
  const double* V = t.q2.value_at(p);
  const double* DX = t.q2.dx_at(p);
  const double* DY = t.q2.dy_at(p);
  if (fields.director) {
    for (int comp = 0; comp < 3; ++comp) {
      double v = 0, gx = 0, gy = 0;
      for (int k = 0; k < 9; ++k) {
        v += V[k] * lc.n[comp][k];
        gx += DX[k] * lc.n[comp][k];
        gy += DY[k] * lc.n[comp][k];
      }
      s.n[comp] = v;
      s.grad_n(comp, 0) = gx * inv_hx;
      s.grad_n(comp, 1) = gy * inv_hy;
    }
  }
  if (fields.potential) {
    double gx = 0, gy = 0;
    for (int k = 0; k < 9; ++k) {
      gx += DX[k] * lc.phi[k];
      gy += DY[k] * lc.phi[k];
    }
    s.grad_phi = {gx * inv_hx, gy * inv_hy, 0.0};
  }
  if (fields.multiplier) {
    const double* V1 = t.q1.value_at(p);
    double v = 0;
    for (int k = 0; k < 4; ++k) v += V1[k] * lc.lam[k];
    s.lambda = v;
  }
}

// Test directions of all local dofs at point p, in field order.
void build_tests(const Tables& t, const FieldSet& fields, int p, double inv_hx,
                 double inv_hy, std::vector<TestFn>& out) {
  const double* V = t.q2.value_at(p);
  const double* DX = t.q2.dx_at(p);
  const double* DY = t.q2.dy_at(p);
  int idx = 0;
  if (fields.director) {
    for (int comp = 0; comp < 3; ++comp)
      for (int k = 0; k < 9; ++k) {
        TestFn& tf = out[idx++];
        tf = TestFn{};
        const double gx = DX[k] * inv_hx, gy = DY[k] * inv_hy;
        tf.v[comp] = V[k];
        if (comp == 0) {
          tf.div_v = gx;
          tf.curl_v = {0.0, 0.0, -gy};
        } else if (comp == 1) {
          tf.div_v = gy;
          tf.curl_v = {0.0, 0.0, gx};
        } else {
          tf.curl_v = {gy, -gx, 0.0};
        }
      }
  }
  if (fields.potential) {
    for (int k = 0; k < 9; ++k) {
      TestFn& tf = out[idx++];
      tf = TestFn{};
      tf.grad_psi = {DX[k] * inv_hx, DY[k] * inv_hy, 0.0};
    }
  }
  if (fields.multiplier) {
    const double* V1 = t.q1.value_at(p);
    for (int k = 0; k < 4; ++k) {
      TestFn& tf = out[idx++];
      tf = TestFn{};
      tf.gamma = V1[k];
    }
  }
}

// Raw dof ids of a cell's local dofs, field order matching build_tests.
void cell_raw_dofs(const DofMap& dm, int row, std::vector<int64_t>& out) {
  int idx = 0;
  const int32_t* q2 = dm.cell_q2.data() + static_cast<size_t>(row) * 9;
  for (Field f : dm.fields.list()) {
    if (field_degree(f) == Degree::q2) {
      for (int k = 0; k < 9; ++k) out[idx++] = dm.dof(f, q2[k]);
    } else {
      const int32_t* q1 = dm.cell_q1.data() + static_cast<size_t>(row) * 4;
      for (int k = 0; k < 4; ++k) out[idx++] = dm.dof(f, q1[k]);
    }
  }
}

// A raw dof written in the reduced basis; at most the three masters of a
// quadratic edge trace.
struct Expansion {
  int n = 0;
  int64_t idx[3];
  double w[3];
};

void expand_dof(const ConstraintSet& cs, int64_t rdof, Expansion& e) {
  const int64_t r = cs.reduced_index(rdof);
  if (r >= 0) {
    e.n = 1;
    e.idx[0] = r;
    e.w[0] = 1.0;
    return;
  }
  const LinearConstraint* c = cs.get(rdof);
  assert(c && c->masters.size() <= 3);
  e.n = 0;
  for (const auto& [m, w] : c->masters) {
    e.idx[e.n] = cs.reduced_index(m);
    assert(e.idx[e.n] >= 0);
    e.w[e.n] = w;
    ++e.n;
  }
}

}  // namespace

int local_dof_count(const FieldSet& fields) {
  return (fields.director ? 27 : 0) + (fields.potential ? 9 : 0) +
         (fields.multiplier ? 4 : 0);
}

double assemble_energy(const FieldState& st, bool augmented, bool parallel) {
  const Mesh& mesh = *st.mesh;
  const Tables t = make_tables(st.quad_points);
  const int nc = mesh.n_active();
  std::vector<double> cell_energy(nc);

#pragma omp parallel for schedule(static) if (parallel)
  for (int row = 0; row < nc; ++row) {
    LocalCoeffs lc;
    gather(st, row, lc);
    double x0, y0, hx, hy;
    mesh.cell_box(mesh.active[row], &x0, &y0, &hx, &hy);
    const double det = hx * hy;
    PointState s;
    double acc = 0.0;
    for (int p = 0; p < t.np; ++p) {
      state_at(t, st.dm->fields, lc, p, 1.0 / hx, 1.0 / hy, s);
      const double w = augmented ? augmented_energy_density(st.params, s)
                                 : energy_density(st.params, s);
      acc += t.weight[p] * det * w;
    }
    cell_energy[row] = acc;
  }

  double total = 0.0;
  for (int row = 0; row < nc; ++row) total += cell_energy[row];
  return total;
}

Eigen::VectorXd assemble_residual(const FieldState& st, bool parallel) {
  const Mesh& mesh = *st.mesh;
  const DofMap& dm = *st.dm;
  const ConstraintSet& cs = *st.cs;
  const Tables t = make_tables(st.quad_points);
  const int nc = mesh.n_active();
  const int L = local_dof_count(dm.fields);
  std::vector<double> locals(static_cast<size_t>(nc) * L);

#pragma omp parallel for schedule(static) if (parallel)
  for (int row = 0; row < nc; ++row) {
    LocalCoeffs lc;
    gather(st, row, lc);
    double x0, y0, hx, hy;
    mesh.cell_box(mesh.active[row], &x0, &y0, &hx, &hy);
    const double det = hx * hy;
    double* rloc = locals.data() + static_cast<size_t>(row) * L;
    std::fill(rloc, rloc + L, 0.0);
    PointState s;
    std::vector<TestFn> tests(L);
    for (int p = 0; p < t.np; ++p) {
      state_at(t, dm.fields, lc, p, 1.0 / hx, 1.0 / hy, s);
      build_tests(t, dm.fields, p, 1.0 / hx, 1.0 / hy, tests);
      const Stress stress = first_variation(st.params, s);
      const double wd = t.weight[p] * det;
      for (int a = 0; a < L; ++a)
        rloc[a] += wd * first_variation_apply(stress, tests[a]);
    }
  }

  Eigen::VectorXd r = Eigen::VectorXd::Zero(cs.n_reduced());
  std::vector<int64_t> dofs(L);
  Expansion e;
  for (int row = 0; row < nc; ++row) {
    cell_raw_dofs(dm, row, dofs);
    const double* rloc = locals.data() + static_cast<size_t>(row) * L;
    for (int a = 0; a < L; ++a) {
      expand_dof(cs, dofs[a], e);
      for (int i = 0; i < e.n; ++i) r[e.idx[i]] += e.w[i] * rloc[a];
    }
  }
  return r;
}

SparseMat assemble_hessian(const FieldState& st, bool parallel) {
  const Mesh& mesh = *st.mesh;
  const DofMap& dm = *st.dm;
  const ConstraintSet& cs = *st.cs;
  const Tables t = make_tables(st.quad_points);
  const int nc = mesh.n_active();
  const int L = local_dof_count(dm.fields);
  std::vector<double> locals(static_cast<size_t>(nc) * L * L);

#pragma omp parallel for schedule(static) if (parallel)
  for (int row = 0; row < nc; ++row) {
    LocalCoeffs lc;
    gather(st, row, lc);
    double x0, y0, hx, hy;
    mesh.cell_box(mesh.active[row], &x0, &y0, &hx, &hy);
    const double det = hx * hy;
    double* hloc = locals.data() + static_cast<size_t>(row) * L * L;
    std::fill(hloc, hloc + L * L, 0.0);
    PointState s;
    std::vector<TestFn> tests(L);
    for (int p = 0; p < t.np; ++p) {
      state_at(t, dm.fields, lc, p, 1.0 / hx, 1.0 / hy, s);
      build_tests(t, dm.fields, p, 1.0 / hx, 1.0 / hy, tests);
      const PointContext ctx = make_context(s);
      const double wd = t.weight[p] * det;
      for (int a = 0; a < L; ++a)
        for (int b = 0; b < L; ++b)
          hloc[a * L + b] +=
              wd * second_variation(st.params, ctx, tests[a], tests[b]);
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(nc) * L * L);
  std::vector<int64_t> dofs(L);
  std::vector<Expansion> ex(L);
  for (int row = 0; row < nc; ++row) {
    cell_raw_dofs(dm, row, dofs);
    for (int a = 0; a < L; ++a) expand_dof(cs, dofs[a], ex[a]);
    const double* hloc = locals.data() + static_cast<size_t>(row) * L * L;
    for (int a = 0; a < L; ++a)
      for (int b = 0; b < L; ++b) {
        const double v = hloc[a * L + b];
        if (v == 0.0) continue;
        for (int i = 0; i < ex[a].n; ++i)
          for (int j = 0; j < ex[b].n; ++j)
            trips.emplace_back(static_cast<int>(ex[a].idx[i]),
                               static_cast<int>(ex[b].idx[j]),
                               ex[a].w[i] * ex[b].w[j] * v);
      }
  }

  SparseMat H(cs.n_reduced(), cs.n_reduced());
  H.setFromTriplets(trips.begin(), trips.end());
  return H;
}

PointState evaluate_state(const FieldState& st, int row, double xr, double yr,
                          bool second_derivs) {
  const Mesh& mesh = *st.mesh;
  const DofMap& dm = *st.dm;
  LocalCoeffs lc;
  gather(st, row, lc);
  double x0, y0, hx, hy;
  mesh.cell_box(mesh.active[row], &x0, &y0, &hx, &hy);
  const double ix = 1.0 / hx, iy = 1.0 / hy;

  double V[9], G[9][2], H2[9][3];
  eval_values(Degree::q2, xr, yr, V);
  eval_gradients(Degree::q2, xr, yr, G);
  if (second_derivs) eval_hessians(Degree::q2, xr, yr, H2);

  PointState s;
  if (dm.fields.director) {
    for (int comp = 0; comp < 3; ++comp) {
      for (int k = 0; k < 9; ++k) {
        const double c = lc.n[comp][k];
        s.n[comp] += V[k] * c;
        s.grad_n(comp, 0) += G[k][0] * ix * c;
        s.grad_n(comp, 1) += G[k][1] * iy * c;
        if (second_derivs) {
          s.sec_n(comp, 0) += H2[k][0] * ix * ix * c;
          s.sec_n(comp, 1) += H2[k][1] * ix * iy * c;
          s.sec_n(comp, 2) += H2[k][2] * iy * iy * c;
        }
      }
    }
  }
  if (dm.fields.potential) {
    for (int k = 0; k < 9; ++k) {
      const double c = lc.phi[k];
      s.grad_phi[0] += G[k][0] * ix * c;
      s.grad_phi[1] += G[k][1] * iy * c;
      if (second_derivs) {
        s.sec_phi[0] += H2[k][0] * ix * ix * c;
        s.sec_phi[1] += H2[k][1] * ix * iy * c;
        s.sec_phi[2] += H2[k][2] * iy * iy * c;
      }
    }
  }
  if (dm.fields.multiplier) {
    double V1[4];
    eval_values(Degree::q1, xr, yr, V1);
    for (int k = 0; k < 4; ++k) s.lambda += V1[k] * lc.lam[k];
  }
  return s;
}

Eigen::VectorXd solve_linear(const SparseMat& A, const Eigen::VectorXd& b,
                             LinearSolveStats* stats) {
  Eigen::SparseLU<SparseMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_linear: sparse LU factorization failed");
  Eigen::VectorXd x = lu.solve(b);
  const double bnorm = b.norm();
  double rel = bnorm == 0.0 ? 0.0 : (b - A * x).norm() / bnorm;
  bool refined = false;
  if (rel > 1e-10) {
    x += lu.solve(b - A * x);
    refined = true;
    rel = bnorm == 0.0 ? 0.0 : (b - A * x).norm() / bnorm;
  }
  if (stats) {
    stats->rel_residual = rel;
    stats->refined = refined;
  }
  return x;
}

}  // namespace lcamr
