#include "lcamr/newton.hpp"

#include <chrono>
#include <stdexcept>

namespace lcamr {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Eigen::VectorXd initial_raw(const Problem& prob, const Mesh& mesh,
                            const DofMap& dm) {
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(dm.total);
  for (int64_t node = 0; node < dm.nq2; ++node) {
    const auto pos = dm.node_pos(dm.q2_key[node], mesh.domain);
    if (dm.fields.director) {
      const auto n = prob.initial_director(pos[0], pos[1]);
      for (int comp = 0; comp < 3; ++comp)
        raw[dm.dof(static_cast<Field>(comp), node)] = n[comp];
    }
    if (dm.fields.potential && prob.initial_potential)
      raw[dm.dof(Field::phi, node)] = prob.initial_potential(pos[0], pos[1]);
  }
  return raw;
}

LevelData build_level(const Problem& prob, const Mesh& mesh) {
  LevelData d;
  d.mesh = mesh;
  d.dm = build_dofmap(d.mesh, prob.fields);
  d.cs = build_constraints(d.mesh, d.dm, active_edges(d.mesh), prob.boundary);
  return d;
}

}  // namespace

FieldState state_view(const LevelData& data, const MaterialParams& params,
                      int quad_points) {
  FieldState st;
  st.mesh = &data.mesh;
  st.dm = &data.dm;
  st.cs = &data.cs;
  st.params = params;
  st.raw = data.raw;
  st.quad_points = quad_points;
  return st;
}

NewtonResult newton_solve(FieldState& st, const NewtonOptions& opt,
                          bool parallel) {
  NewtonResult res;
  for (;;) {
    const Eigen::VectorXd r = assemble_residual(st, parallel);
    const double rnorm = r.norm();
    res.residual_history.push_back(rnorm);
    res.final_residual = rnorm;
    if (rnorm <= opt.tol) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= opt.max_iters) return res;

    const SparseMat H = assemble_hessian(st, parallel);
    res.nnz_history.push_back(H.nonZeros());
    const Eigen::VectorXd delta = solve_linear(H, (-r).eval());
    for (int64_t i = 0; i < st.cs->n_reduced(); ++i)
      st.raw[st.cs->raw_index(i)] += opt.alpha * delta[i];
    st.cs->distribute(st.raw);
    ++res.iterations;
  }
}

RunReport nested_iteration(const Problem& prob, const NIOptions& opt,
                           const LevelSink& sink) {
  if (opt.levels < 1)
    throw std::invalid_argument("nested_iteration: need at least one level");
  if (opt.count_only && !opt.uniform)
    throw std::invalid_argument("nested_iteration: count_only requires uniform");

  RunReport report;
  LevelData cur = build_level(prob, uniform_mesh(opt.nx, opt.ny));
  if (!opt.count_only) {
    cur.raw = initial_raw(prob, cur.mesh, cur.dm);
    cur.cs.distribute(cur.raw);
  }

  for (int level = 0;; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    LevelReport lr;
    lr.level = level;
    lr.raw_dofs = cur.dm.total;
    lr.reduced_dofs = cur.cs.n_reduced();
    lr.active_cells = cur.mesh.n_active();
    lr.alpha = std::min(0.2 * (level + 1), 1.0);

    std::vector<int32_t> marked;
    if (!opt.count_only) {
      FieldState st = state_view(cur, prob.params, opt.quad_points);
      NewtonOptions nopt;
      nopt.tol = opt.tol;
      nopt.max_iters = opt.max_iters;
      nopt.alpha = lr.alpha;
      NewtonResult nr;
      try {
        nr = newton_solve(st, nopt, opt.parallel);
      } catch (const std::exception& ex) {
        report.failed = true;
        report.failure =
            "level " + std::to_string(level) + ": " + std::string(ex.what());
        lr.wall_seconds = seconds_since(t0);
        report.levels.push_back(std::move(lr));
        return report;
      }
      cur.raw = st.raw;
      lr.newton_iters = nr.iterations;
      lr.final_residual = nr.final_residual;
      lr.converged = nr.converged;
      lr.residual_history = nr.residual_history;
      lr.newton_nnz = nr.nnz_history;
      for (size_t i = 0; i < nr.nnz_history.size(); ++i)
        report.ledger.record(level, static_cast<int>(i), nr.nnz_history[i]);

      lr.energy = assemble_energy(st, false, opt.parallel);
      lr.locals = local_estimates(st, opt.parallel);
      lr.estimate = global_estimate(lr.locals);
      if (prob.has_exact) {
        const H1Error err = h1_error(st, prob, opt.parallel);
        lr.h1 = err.global;
        lr.h1_cells2 = err.cell2;
      }
      if (prob.params.electric) lr.gauss = gauss_conformance(st, opt.parallel);
      const UnitDeviation dev = unit_length_deviation(st, opt.parallel);
      lr.dev_above = dev.above;
      lr.dev_below = dev.below;

      if (!lr.converged) {
        report.failed = true;
        report.failure = "level " + std::to_string(level) +
                         ": newton stopped at residual " +
                         std::to_string(lr.final_residual) + " after " +
                         std::to_string(lr.newton_iters) + " iterations";
      } else if (!opt.uniform && level + 1 < opt.levels) {
        marked = mark_cells(lr.locals, opt.marking, opt.nu);
      }
    }
    if (opt.uniform && level + 1 < opt.levels)
      marked.assign(cur.mesh.active.begin(), cur.mesh.active.end());

    lr.wall_seconds = seconds_since(t0);
    report.levels.push_back(std::move(lr));
    if (sink) sink(report.levels.back(), cur, prob);

    if (report.failed || level + 1 >= opt.levels) break;
    if (opt.max_raw_dofs > 0 && cur.dm.total > opt.max_raw_dofs) break;
    if (marked.empty() && !opt.count_only && !opt.uniform) break;

    LevelData next = build_level(prob, refine(cur.mesh, marked));
    if (!opt.count_only) {
      next.raw = transfer_state(cur.mesh, cur.dm, cur.raw, next.mesh, next.dm);
      next.cs.distribute(next.raw);
    }
    cur = std::move(next);
  }

  if (!opt.count_only && !report.failed) {
    report.has_final = true;
    report.final_state = std::move(cur);
  }
  return report;
}

}  // namespace lcamr
