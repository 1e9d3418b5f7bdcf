// End-to-end acceptance runs for the library. Each check prints one
// [PASS]/[FAIL] line; the exit status is the number of failures. The slow
// checks are full nested-iteration solves and take minutes each.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lcamr/newton.hpp"
#include "lcamr/reports.hpp"

using namespace lcamr;

namespace {

int failures = 0;

void report(int id, const char* label, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, label,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// ---------------------------------------------------------------- states

// Mesh with one refined interior cell, fields initialized from the
// problem's initial data, free dofs perturbed.
struct Bundle {
  LevelData data;
  Problem prob;
};

Bundle make_state(Problem prob, int nx, unsigned seed, double amp) {
  Bundle b{{}, std::move(prob)};
  const Mesh base = uniform_mesh(nx, nx);
  b.data.mesh = refine(base, {base.at(0, nx / 2, nx / 2)});
  b.data.dm = build_dofmap(b.data.mesh, b.prob.fields);
  b.data.cs = build_constraints(b.data.mesh, b.data.dm,
                                active_edges(b.data.mesh), b.prob.boundary);
  const DofMap& dm = b.data.dm;
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(dm.total);
  for (int64_t i = 0; i < dm.nq2; ++i) {
    const auto pos = dm.node_pos(dm.q2_key[i], b.data.mesh.domain);
    const auto n = b.prob.initial_director(pos[0], pos[1]);
    raw[dm.dof(Field::n1, i)] = n[0];
    raw[dm.dof(Field::n2, i)] = n[1];
    raw[dm.dof(Field::n3, i)] = n[2];
    if (dm.fields.potential && b.prob.initial_potential)
      raw[dm.dof(Field::phi, i)] = b.prob.initial_potential(pos[0], pos[1]);
  }
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  for (int64_t r = 0; r < b.data.cs.n_reduced(); ++r)
    raw[b.data.cs.raw_index(r)] += u(rng);
  b.data.cs.distribute(raw);
  b.data.raw = raw;
  return b;
}

double energy_at(const Bundle& b, const Eigen::VectorXd& raw) {
  LevelData shifted{b.data.mesh, b.data.dm, b.data.cs, raw};
  FieldState st = state_view(shifted, b.prob.params, 5);
  return assemble_energy(st, true);
}

Eigen::VectorXd residual_at(const Bundle& b, const Eigen::VectorXd& raw) {
  LevelData shifted{b.data.mesh, b.data.dm, b.data.cs, raw};
  FieldState st = state_view(shifted, b.prob.params, 5);
  return assemble_residual(st);
}

// ------------------------------------------------------------- criteria

void criterion_benchmark_energy() {
  Problem prob = elastic_benchmark_problem(Formulation::penalty, 1e8);
  NIOptions opt;
  opt.nx = opt.ny = 32;
  opt.levels = 4;
  opt.marking = Marking::dorfler;
  opt.nu = 0.9;
  opt.max_iters = 200;
  const RunReport rep = nested_iteration(prob, opt);
  if (rep.failed || rep.levels.empty()) {
    report(1, "benchmark energy", false, "run failed: " + rep.failure);
    return;
  }
  const double g = rep.levels.back().energy;
  const double err = std::abs(g - 8.717);
  report(1, "benchmark energy", err < 1e-2,
         fmt("G = %.6f, |G - 8.717| = %.2e", g, err));
}

void criterion_dof_bookkeeping() {
  NIOptions opt;
  opt.nx = opt.ny = 16;
  opt.levels = 6;
  opt.uniform = true;
  opt.count_only = true;
  const RunReport pen =
      nested_iteration(flexo_problem(Formulation::penalty, 1e5), opt);
  const RunReport lag =
      nested_iteration(flexo_problem(Formulation::lagrangian, 0.0), opt);
  bool ok = !pen.failed && !lag.failed && pen.levels.size() == 6 &&
            lag.levels.size() == 6;
  int64_t p = 0, l = 0;
  if (ok) {
    p = pen.levels.back().raw_dofs;
    l = lag.levels.back().raw_dofs;
    for (const auto& lr : pen.levels) ok = ok && lr.newton_iters == 0;
    ok = ok && p == 4202500 && l == 4465669;
  }
  std::ostringstream os;
  os << "fine raw dofs " << p << " / " << l
     << " (want 4202500 / 4465669)";
  report(2, "dof bookkeeping", ok, os.str());
}

void criterion_derivatives() {
  const double h = 1e-5;
  double worst = 0.0;
  int states = 0;
  bool ok = true;
  std::mt19937 rng(2026);
  for (int coupled = 0; coupled < 2; ++coupled)
    for (int lag = 0; lag < 2; ++lag)
      for (unsigned seed = 0; seed < 3; ++seed) {
        const Formulation form =
            lag ? Formulation::lagrangian : Formulation::penalty;
        Problem prob = coupled ? flexo_problem(form, 50.0)
                               : elastic_benchmark_problem(form, 50.0);
        Bundle b = make_state(std::move(prob), 4, 900 + seed, 0.05);
        ++states;
        const Eigen::VectorXd r = residual_at(b, b.data.raw);
        const int64_t nred = b.data.cs.n_reduced();
        std::uniform_int_distribution<int64_t> pick(0, nred - 1);
        for (int k = 0; k < 8; ++k) {
          const int64_t red = pick(rng);
          const int64_t dof = b.data.cs.raw_index(red);
          Eigen::VectorXd up = b.data.raw, dn = b.data.raw;
          up[dof] += h;
          dn[dof] -= h;
          b.data.cs.distribute(up);
          b.data.cs.distribute(dn);
          const double fd = (energy_at(b, up) - energy_at(b, dn)) / (2 * h);
          const double rel =
              std::abs(fd - r[red]) / std::max(1.0, std::abs(r[red]));
          worst = std::max(worst, rel);
          ok = ok && rel < 1e-6;
        }
        // Hessian action against a differenced residual.
        LevelData live = b.data;
        FieldState st = state_view(live, b.prob.params, 5);
        const SparseMat H = assemble_hessian(st);
        std::normal_distribution<double> g01(0.0, 1.0);
        Eigen::VectorXd w(nred);
        for (int64_t i = 0; i < nred; ++i) w[i] = g01(rng);
        w /= w.norm();
        Eigen::VectorXd up = b.data.raw, dn = b.data.raw;
        for (int64_t i = 0; i < nred; ++i) {
          up[b.data.cs.raw_index(i)] += h * w[i];
          dn[b.data.cs.raw_index(i)] -= h * w[i];
        }
        b.data.cs.distribute(up);
        b.data.cs.distribute(dn);
        const Eigen::VectorXd fd =
            (residual_at(b, up) - residual_at(b, dn)) / (2 * h);
        const Eigen::VectorXd hw = H * w;
        const double rel =
            (fd - hw).norm() / std::max(1.0, hw.norm());
        worst = std::max(worst, rel);
        ok = ok && rel < 1e-6;
      }
  std::ostringstream os;
  os << "worst relative error " << fmt("%.2e", worst) << " over " << states
     << " states";
  report(3, "derivative consistency", ok, os.str());
}

void criterion_estimator_identities() {
  bool ok = true;
  std::string note;

  // Constant unit director, zero potential: every indicator vanishes.
  for (int coupled = 0; coupled < 2; ++coupled) {
    Problem prob = coupled ? flexo_problem(Formulation::lagrangian, 0.0)
                           : elastic_benchmark_problem(Formulation::penalty, 7.0);
    prob.boundary = BoundaryValues{};  // nothing pinned, hanging only
    Bundle b = make_state(std::move(prob), 4, 1, 0.0);
    const DofMap& dm = b.data.dm;
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(dm.total);
    for (int64_t i = 0; i < dm.nq2; ++i) raw[dm.dof(Field::n3, i)] = 1.0;
    b.data.cs.distribute(raw);
    b.data.raw = raw;
    FieldState st = state_view(b.data, b.prob.params, 5);
    const double theta = global_estimate(local_estimates(st));
    if (theta > 1e-8) {  // zero up to zeta-amplified roundoff
      ok = false;
      note += "constant-unit theta nonzero; ";
    }
  }

  // Zeroed couplings with a silent potential reproduce the elastic
  // indicators bitwise.
  {
    MaterialParams elastic;
    elastic.K1 = 1.3;
    elastic.K2 = 0.8;
    elastic.K3 = 1.5;
    elastic.zeta = 3.0;
    MaterialParams coupled = elastic;
    coupled.electric = true;
    coupled.eps0 = 2.2;
    coupled.eps_perp = 5.0;
    coupled.eps_a = 0.0;
    coupled.e_s = 0.0;
    coupled.e_b = 0.0;

    const Mesh base = uniform_mesh(4, 4);
    const Mesh mesh = refine(base, {base.at(0, 1, 1), base.at(0, 2, 2)});
    const DofMap dm_e = build_dofmap(mesh, FieldSet{true, false, false});
    const DofMap dm_c = build_dofmap(mesh, FieldSet{true, true, false});
    ConstraintSet cs_e =
        build_constraints(mesh, dm_e, active_edges(mesh), BoundaryValues{});
    ConstraintSet cs_c =
        build_constraints(mesh, dm_c, active_edges(mesh), BoundaryValues{});
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd dir(3 * dm_e.nq2);
    for (int64_t i = 0; i < dir.size(); ++i) dir[i] = u(rng);
    Eigen::VectorXd raw_e = dir;
    Eigen::VectorXd raw_c = Eigen::VectorXd::Zero(dm_c.total);
    raw_c.head(dir.size()) = dir;  // director blocks lead in both maps
    cs_e.distribute(raw_e);
    cs_c.distribute(raw_c);
    LevelData de{mesh, dm_e, cs_e, raw_e};
    LevelData dc{mesh, dm_c, cs_c, raw_c};
    FieldState se = state_view(de, elastic, 5);
    FieldState sc = state_view(dc, coupled, 5);
    const auto le = local_estimates(se);
    const auto lc = local_estimates(sc);
    for (size_t i = 0; i < le.size(); ++i) {
      if (lc[i].vol_director != le[i].vol_director ||
          lc[i].edge != le[i].edge || lc[i].vol_potential != 0.0 ||
          lc[i].constraint != le[i].constraint) {
        ok = false;
        note += "coupled collapse mismatch; ";
        break;
      }
    }
  }

  // Potential residual against an independently expanded divergence.
  double worst = 0.0;
  {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      MaterialParams mp;
      mp.K1 = 1.0;
      mp.K2 = 0.62903;
      mp.K3 = 1.32258;
      mp.eps0 = 1.42809;
      mp.eps_perp = 7.0;
      mp.eps_a = 11.5;
      mp.e_s = 1.5;
      mp.e_b = -1.5;
      mp.electric = true;
      mp.formulation =
          trial % 2 ? Formulation::lagrangian : Formulation::penalty;
      mp.zeta = trial % 2 ? 0.0 : 10.0;
      PointState s;
      for (int i = 0; i < 3; ++i) {
        s.n[i] = u(rng);
        s.grad_phi[i] = u(rng);
        s.sec_phi[i] = u(rng);
        for (int j = 0; j < 2; ++j) s.grad_n(i, j) = u(rng);
        for (int j = 0; j < 3; ++j) s.sec_n(i, j) = u(rng);
      }
      s.grad_phi[2] = 0.0;
      s.lambda = u(rng);
      const double q = strong_residuals(mp, s).q;
      const double dd = displacement_divergence(mp, s);
      worst = std::max(worst, std::abs(q + dd));
    }
    if (worst > 1e-12) {
      ok = false;
      note += "q vs -div D drift; ";
    }
  }
  report(4, "estimator identities", ok,
         note.empty() ? fmt("q vs -div D worst %.2e on 100 states", worst)
                      : note);
}

void criterion_effectivity() {
  struct Trial {
    Marking m;
    double nu;
  };
  const Trial trials[] = {{Marking::fixed, 0.3},
                          {Marking::bandwidth, 0.5},
                          {Marking::dorfler, 0.9}};
  bool ok = true;
  std::string note;
  for (const Trial& t : trials) {
    // High zeta keeps the penalty model error far below the H1 error
    // resolved on these meshes; the error floor would otherwise flatten
    // the late-level effectivities.
    Problem prob = elastic_benchmark_problem(Formulation::penalty, 1e8);
    NIOptions opt;
    opt.nx = opt.ny = 32;
    opt.levels = 4;
    opt.marking = t.m;
    opt.nu = t.nu;
    opt.max_iters = 200;
    const RunReport rep = nested_iteration(prob, opt);
    if (rep.failed) {
      ok = false;
      note += std::string(marking_name(t.m)) + " run failed; ";
      continue;
    }
    std::vector<double> est, err;
    for (const auto& lr : rep.levels) {
      est.push_back(lr.estimate);
      err.push_back(lr.h1);
    }
    const std::vector<double> eff = effectivity(est, err);
    const auto [lo, hi] = std::minmax_element(eff.begin(), eff.end());
    const double spread = *hi / *lo;
    bool mono = true;
    for (size_t k = 1; k < err.size(); ++k) mono = mono && err[k] < err[k - 1];
    if (spread >= 5.0 || !mono) ok = false;
    note += fmt("%.2f", spread) + std::string(mono ? "" : " (H1 not monotone)") +
            std::string(&t == &trials[2] ? "" : ", ");
  }
  report(5, "effectivity and error decay", ok,
         "effectivity spread per marking: " + note);
}

void criterion_work_advantage() {
  Problem prob = elastic_benchmark_problem(Formulation::penalty, 1e8);
  NIOptions uni;
  uni.nx = uni.ny = 32;
  uni.levels = 3;
  uni.uniform = true;
  uni.max_iters = 200;
  const RunReport u = nested_iteration(prob, uni);
  if (u.failed) {
    report(6, "adaptive work advantage", false, "uniform run failed");
    return;
  }
  const double target_h1 = u.levels.back().h1;
  const int64_t w_uniform = u.ledger.total_nnz();

  auto adaptive = [&](Marking m) {
    NIOptions opt;
    opt.nx = opt.ny = 32;
    opt.levels = 10;
    opt.marking = m;
    opt.nu = 0.9;
    opt.max_iters = 200;
    opt.max_raw_dofs = u.levels.back().raw_dofs;
    return nested_iteration(prob, opt);
  };

  double ratio = -1.0;
  bool ok = false;
  const char* used = "dorfler";
  for (Marking m : {Marking::dorfler, Marking::bandwidth}) {
    const RunReport a = adaptive(m);
    if (a.failed) continue;
    int crossing = -1;
    for (size_t k = 0; k < a.levels.size(); ++k)
      if (a.levels[k].h1 <= target_h1) {
        crossing = static_cast<int>(k);
        break;
      }
    if (crossing < 0) continue;
    int64_t w_amr = 0;
    for (const auto& e : a.ledger.entries)
      if (e.level <= crossing) w_amr += e.nnz;
    const double r = double(w_amr) / double(w_uniform);
    if (ratio < 0 || r < ratio) {
      ratio = r;
      used = marking_name(m);
    }
    if (r <= 0.5) {
      ok = true;
      break;
    }
  }
  report(6, "adaptive work advantage", ok,
         ratio < 0 ? "no adaptive run reached the uniform error"
                   : fmt("%.3f of uniform work units", ratio) + " via " + used);
}

// Reference markers mirroring the documented selection rules.
std::vector<int> order_desc(const std::vector<double>& theta) {
  std::vector<int> idx(theta.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return theta[a] > theta[b]; });
  return idx;
}

std::vector<int> brute_fixed(const std::vector<double>& theta, double nu) {
  const auto idx = order_desc(theta);
  const size_t count =
      static_cast<size_t>(std::ceil(nu * static_cast<double>(theta.size())));
  std::vector<int> out(idx.begin(), idx.begin() + count);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> brute_bandwidth(const std::vector<double>& theta, double nu) {
  const double cut = (1.0 - nu) * *std::max_element(theta.begin(), theta.end());
  std::vector<int> out;
  for (size_t i = 0; i < theta.size(); ++i)
    if (theta[i] >= cut) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> brute_dorfler(const std::vector<double>& theta, double nu) {
  double total = 0.0;
  for (double t : theta) total += t * t;
  const double target = (1.0 - nu) * total;
  std::vector<int> out;
  double sum = 0.0;
  for (int i : order_desc(theta)) {
    if (sum >= target || theta[i] == 0.0) break;
    out.push_back(i);
    sum += theta[i] * theta[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

void criterion_marking() {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> len(1, 50);
  std::uniform_real_distribution<double> unu(0.05, 0.95);
  std::exponential_distribution<double> mag(1.0);
  std::uniform_int_distribution<int> coin(0, 5);
  bool ok = true;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    const int m = len(rng);
    std::vector<double> theta(m);
    for (double& t : theta) t = coin(rng) == 0 ? 0.0 : mag(rng);
    if (m > 1 && coin(rng) == 1)
      theta[0] = *std::max_element(theta.begin(), theta.end());
    const double nu = unu(rng);
    ok = ok && mark(Marking::fixed, theta, nu) == brute_fixed(theta, nu);
    ok = ok &&
         mark(Marking::bandwidth, theta, nu) == brute_bandwidth(theta, nu);
    const auto d = mark(Marking::dorfler, theta, nu);
    ok = ok && d == brute_dorfler(theta, nu);
    // Minimality: dropping the smallest selected cell misses the target.
    double total = 0.0, sum = 0.0, smallest = 0.0;
    for (double t : theta) total += t * t;
    for (int i : d) sum += theta[i] * theta[i];
    if (!d.empty()) {
      smallest = theta[d[0]] * theta[d[0]];
      for (int i : d) smallest = std::min(smallest, theta[i] * theta[i]);
      ok = ok && sum >= (1.0 - nu) * total - 1e-12 &&
           sum - smallest < (1.0 - nu) * total + 1e-12;
    } else {
      ok = ok && total == 0.0;
    }
  }
  report(7, "marking oracles", ok, "1000 randomized vectors, 3 strategies");
}

void criterion_mesh_transfer() {
  bool ok = true;
  std::string note;
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  for (int trial = 0; trial < 6 && ok; ++trial) {
    std::uniform_int_distribution<int> base(2, 4);
    Mesh mesh = uniform_mesh(base(rng), base(rng));
    for (int round = 0; round < 3; ++round) {
      std::vector<int32_t> marks;
      for (int32_t id : mesh.active)
        if (rng() % 3 == 0) marks.push_back(id);
      if (marks.empty()) marks.push_back(mesh.active[0]);
      mesh = refine(mesh, marks);
    }
    // 1-irregularity and the active face census.
    int nb = 0, nc = 0, nh = 0;
    const auto edges = active_edges(mesh);
    for (const Edge& e : edges) {
      if (e.kind == EdgeKind::boundary) {
        ++nb;
      } else if (e.kind == EdgeKind::conforming) {
        ++nc;
        if (mesh.cell(e.cells[0]).level != mesh.cell(e.cells[1]).level)
          ok = false;
      } else {
        ++nh;
        const int coarse = mesh.cell(e.cells[e.coarse_side]).level;
        const int fine = mesh.cell(e.cells[1 - e.coarse_side]).level;
        if (fine - coarse != 1) ok = false;
      }
    }
    if (4.0 * mesh.n_active() != nb + 2.0 * nc + 1.5 * nh) {
      ok = false;
      note += "face census broken; ";
    }

    // Hanging traces of a random distributed vector agree from both sides.
    const FieldSet fields{true, true, true};
    const DofMap dm = build_dofmap(mesh, fields);
    ConstraintSet cs = build_constraints(mesh, dm, edges, BoundaryValues{});
    Eigen::VectorXd raw(dm.total);
    for (int64_t i = 0; i < dm.total; ++i) raw[i] = u(rng);
    cs.distribute(raw);
    for (const Edge& e : edges) {
      if (!ok) break;
      if (e.kind != EdgeKind::hanging) continue;
      for (double t : {0.23, 0.5, 0.81}) {
        const double x = e.p0[0] + t * (e.p1[0] - e.p0[0]);
        const double y = e.p0[1] + t * (e.p1[1] - e.p0[1]);
        for (Field f :
             {Field::n1, Field::n2, Field::n3, Field::phi, Field::lambda}) {
          const double a = eval_field(mesh, dm, raw, f, e.cells[0], x, y);
          const double b = eval_field(mesh, dm, raw, f, e.cells[1], x, y);
          if (std::abs(a - b) > 1e-12) {
            ok = false;
            note += "trace jump; ";
          }
        }
      }
    }

    // Interpolation transfer is exact on what either space reproduces.
    std::vector<int32_t> marks;
    for (int32_t id : mesh.active)
      if (rng() % 4 == 0) marks.push_back(id);
    if (marks.empty()) marks.push_back(mesh.active.back());
    const Mesh fine = refine(mesh, marks);
    const DofMap fdm = build_dofmap(fine, fields);
    auto quad = [](double x, double y, int s) {
      return 0.3 * s + x - 2.0 * y + 1.5 * x * x + 0.7 * x * y - 2.2 * y * y;
    };
    auto bilin = [](double x, double y) {
      return 0.4 - 1.1 * x + 2.3 * y + 0.9 * x * y;
    };
    Eigen::VectorXd craw(dm.total);
    for (int64_t i = 0; i < dm.nq2; ++i) {
      const auto p = dm.node_pos(dm.q2_key[i], mesh.domain);
      for (int f = 0; f < 4; ++f)
        craw[dm.dof(static_cast<Field>(f), i)] = quad(p[0], p[1], f);
    }
    for (int64_t i = 0; i < dm.nq1; ++i) {
      const auto p = dm.node_pos(dm.q1_key[i], mesh.domain);
      craw[dm.dof(Field::lambda, i)] = bilin(p[0], p[1]);
    }
    const Eigen::VectorXd fraw = transfer_state(mesh, dm, craw, fine, fdm);
    for (int64_t i = 0; i < fdm.nq2 && ok; ++i) {
      const auto p = fdm.node_pos(fdm.q2_key[i], fine.domain);
      for (int f = 0; f < 4; ++f)
        if (std::abs(fraw[fdm.dof(static_cast<Field>(f), i)] -
                     quad(p[0], p[1], f)) > 1e-12) {
          ok = false;
          note += "transfer not exact; ";
        }
    }
    for (int64_t i = 0; i < fdm.nq1 && ok; ++i) {
      const auto p = fdm.node_pos(fdm.q1_key[i], fine.domain);
      if (std::abs(fraw[fdm.dof(Field::lambda, i)] - bilin(p[0], p[1])) >
          1e-12) {
        ok = false;
        note += "transfer not exact; ";
      }
    }
  }
  report(8, "mesh and transfer", ok,
         note.empty() ? "6 randomized hierarchies" : note);
}

void criterion_coupled_directions() {
  Problem prob = flexo_problem(Formulation::penalty, 1e5);
  NIOptions uni;
  uni.nx = uni.ny = 16;
  uni.levels = 4;
  uni.uniform = true;
  uni.max_iters = 200;
  const RunReport u = nested_iteration(prob, uni);
  NIOptions amr = uni;
  amr.uniform = false;
  amr.levels = 10;
  amr.marking = Marking::dorfler;
  // nu = 0.1 marks the cells carrying ninety percent of the squared
  // estimate each level, so the transition layers refine deeply while the
  // bulk stays coarse. The cap sits at half the uniform fine size; the
  // level that passes it is still solved, so the adapted run ends near the
  // uniform size without outgrowing it.
  amr.nu = 0.1;
  amr.max_raw_dofs = u.failed ? 0 : u.levels.back().raw_dofs / 2;
  const RunReport a = nested_iteration(prob, amr);
  if (u.failed || a.failed) {
    report(9, "coupled direction checks", false,
           "run failed: " + (u.failed ? u.failure : a.failure));
    return;
  }
  bool ok = true;
  std::string note;
  for (const RunReport* rep : {&u, &a})
    for (size_t k = 0; k < rep->levels.size(); ++k) {
      const double e = rep->levels[k].energy;
      if (e >= 0.0) ok = false;
      if (k && e >= rep->levels[k - 1].energy + 1e-7) ok = false;
    }
  if (!ok) note += "energy not negative-decreasing; ";

  // Comparison point: the deepest adapted level that does not outspend the
  // uniform fine grid. The cap keeps it within a factor two of that size.
  const LevelReport* cmp = nullptr;
  for (const auto& lr : a.levels)
    if (lr.raw_dofs <= u.levels.back().raw_dofs) cmp = &lr;
  if (!cmp) {
    report(9, "coupled direction checks", false, "no comparable level");
    return;
  }
  const double gu = u.levels.back().gauss, ga = cmp->gauss;
  if (!(ga < gu)) {
    ok = false;
    note += fmt("gauss %.3e vs uniform %.3e; ", ga, gu);
  }
  const double du =
      std::max(u.levels.back().dev_above, u.levels.back().dev_below);
  const double da = std::max(cmp->dev_above, cmp->dev_below);
  if (!(da <= 2.0 * du + 1e-14)) {
    ok = false;
    note += fmt("deviation %.3e vs uniform %.3e; ", da, du);
  }
  if (note.empty())
    note = fmt("gauss %.3e < %.3e", ga, gu) +
           fmt(" at %.0f vs %.0f dofs", static_cast<double>(cmp->raw_dofs),
               static_cast<double>(u.levels.back().raw_dofs)) +
           fmt(", dev %.2e vs %.2e", da, du);
  report(9, "coupled direction checks", ok, note);
}

void criterion_distribution() {
  Problem prob = elastic_benchmark_problem(Formulation::penalty, 1e8);
  NIOptions opt;
  opt.nx = opt.ny = 32;
  opt.levels = 3;
  opt.marking = Marking::bandwidth;
  opt.nu = 0.9;
  opt.max_iters = 200;
  const RunReport rep = nested_iteration(prob, opt);
  if (rep.failed || rep.levels.size() < 2) {
    report(10, "distribution flattening", false, "run failed");
    return;
  }
  auto areas = [](const LevelReport& lr) {
    std::vector<double> est;
    for (const auto& le : lr.locals) est.push_back(le.theta2());
    return std::array<double, 2>{distribution_curve(est).area(),
                                 distribution_curve(lr.h1_cells2).area()};
  };
  const auto first = areas(rep.levels.front());
  const auto last = areas(rep.levels.back());
  const bool ok = last[0] < first[0] && last[1] < first[1];
  report(10, "distribution flattening", ok,
         fmt("estimator area %.3f -> %.3f", first[0], last[0]) +
             fmt(", error area %.3f -> %.3f", first[1], last[1]));
}

}  // namespace

int main() {
  std::printf("acceptance checks, full solves included; expect minutes\n");
  std::fflush(stdout);
  criterion_benchmark_energy();
  criterion_dof_bookkeeping();
  criterion_derivatives();
  criterion_estimator_identities();
  criterion_effectivity();
  criterion_work_advantage();
  criterion_marking();
  criterion_mesh_transfer();
  criterion_coupled_directions();
  criterion_distribution();
  std::printf("%s\n", failures ? "ACCEPTANCE: FAIL" : "ACCEPTANCE: PASS");
  return failures;
}
