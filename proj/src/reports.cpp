#include "lcamr/reports.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <unordered_map>

namespace lcamr {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

uint64_t key_hash(const std::array<int64_t, 2>& k) {
  return (static_cast<uint64_t>(k[0]) << 31) | static_cast<uint64_t>(k[1]);
}

}  // namespace

bool ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  return !ec && std::filesystem::is_directory(dir);
}

void write_run_artifacts(const std::string& dir, const RunConfig& cfg,
                         const RunReport& report) {
  {
    auto out = open_out(dir + "/report.csv");
    out << "level,raw_dofs,reduced_dofs,active_cells,alpha,newton_iters,"
           "final_residual,converged,energy,estimate,h1_error,"
           "gauss_conformance,dev_above,dev_below\n";
    for (const LevelReport& lr : report.levels) {
      out << lr.level << ',' << lr.raw_dofs << ',' << lr.reduced_dofs << ','
          << lr.active_cells << ',' << lr.alpha << ',' << lr.newton_iters
          << ',' << lr.final_residual << ',' << (lr.converged ? 1 : 0) << ','
          << lr.energy << ',' << lr.estimate << ',' << lr.h1 << ','
          << lr.gauss << ',' << lr.dev_above << ',' << lr.dev_below << '\n';
    }
  }
  {
    auto out = open_out(dir + "/work_ledger.csv");
    out << "level,newton_step,nnz,cumulative_wu\n";
    // Single-run ledgers normalize by the run's last recorded Hessian.
    const int64_t ref = report.ledger.entries.empty()
                            ? 1
                            : report.ledger.entries.back().nnz;
    int64_t cum = 0;
    for (const auto& e : report.ledger.entries) {
      cum += e.nnz;
      out << e.level << ',' << e.step << ',' << e.nnz << ','
          << static_cast<double>(cum) / static_cast<double>(ref) << '\n';
    }
  }
  {
    auto out = open_out(dir + "/summary.txt");
    out << "problem " << cfg.problem << '\n'
        << "formulation "
        << (cfg.formulation == Formulation::penalty ? "penalty" : "lagrangian")
        << '\n'
        << "refinement " << (cfg.uniform ? "uniform" : "amr") << '\n';
    if (!cfg.uniform)
      out << "marking " << marking_name(cfg.marking) << " nu " << cfg.nu
          << '\n';
    out << "grid " << cfg.nx << "x" << cfg.ny << " levels " << cfg.levels
        << '\n';
    if (cfg.formulation == Formulation::penalty)
      out << "zeta " << cfg.zeta << '\n';
    double total_wall = 0.0;
    for (const LevelReport& lr : report.levels) {
      total_wall += lr.wall_seconds;
      out << "level " << lr.level << ": dofs " << lr.raw_dofs << " ("
          << lr.reduced_dofs << " free), cells " << lr.active_cells
          << ", newton " << lr.newton_iters << " (residual "
          << lr.final_residual << (lr.converged ? "" : ", NOT CONVERGED")
          << "), energy " << lr.energy << ", estimate " << lr.estimate;
      if (lr.h1 >= 0.0) out << ", h1 " << lr.h1;
      if (lr.gauss >= 0.0) out << ", gauss " << lr.gauss;
      out << ", wall " << std::setprecision(3) << lr.wall_seconds << "s"
          << std::setprecision(17) << '\n';
    }
    out << "total wall " << std::setprecision(3) << total_wall << "s"
        << std::setprecision(17) << '\n';
    if (report.failed) out << "FAILED: " << report.failure << '\n';
  }
}

void write_level_artifacts(const std::string& dir, const LevelReport& lr,
                           const LevelData& data) {
  const std::string tag = std::to_string(lr.level);
  {
    auto out = open_out(dir + "/estimator_cells_level" + tag + ".csv");
    out << "cell,centroid_x,centroid_y,cell_level,theta2_vol_director,"
           "theta2_vol_potential,theta2_edge,theta2_constraint,theta\n";
    for (const LocalEstimate& le : lr.locals) {
      double x0, y0, hx, hy;
      data.mesh.cell_box(le.cell, &x0, &y0, &hx, &hy);
      out << le.cell << ',' << x0 + 0.5 * hx << ',' << y0 + 0.5 * hy << ','
          << data.mesh.cell(le.cell).level << ',' << le.vol_director << ','
          << le.vol_potential << ',' << le.edge << ',' << le.constraint << ','
          << le.theta() << '\n';
    }
  }
  if (!lr.locals.empty()) {
    std::vector<double> theta2(lr.locals.size());
    for (size_t i = 0; i < lr.locals.size(); ++i)
      theta2[i] = lr.locals[i].theta2();
    const bool have_theta =
        *std::max_element(theta2.begin(), theta2.end()) > 0.0;
    const bool have_h1 =
        !lr.h1_cells2.empty() &&
        *std::max_element(lr.h1_cells2.begin(), lr.h1_cells2.end()) > 0.0;
    if (have_theta) {
      const DistributionCurve est = distribution_curve(theta2);
      DistributionCurve err;
      if (have_h1) err = distribution_curve(lr.h1_cells2);
      auto out = open_out(dir + "/distribution_level" + tag + ".csv");
      out << (have_h1 ? "frac_cells,frac_estimator,frac_h1\n"
                      : "frac_cells,frac_estimator\n");
      for (size_t k = 0; k < est.frac_cells.size(); ++k) {
        out << est.frac_cells[k] << ',' << est.frac_total[k];
        if (have_h1) out << ',' << err.frac_total[k];
        out << '\n';
      }
    }
  }
}

void write_vtk(const std::string& path, const LevelData& data,
               const LevelReport* lr) {
  const Mesh& mesh = data.mesh;
  const DofMap& dm = data.dm;
  auto out = open_out(path);
  out << "# vtk DataFile Version 3.0\n"
      << "director and potential fields\n"
      << "ASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << dm.nq1 << " double\n";
  for (int64_t i = 0; i < dm.nq1; ++i) {
    const auto pos = dm.node_pos(dm.q1_key[i], mesh.domain);
    out << pos[0] << ' ' << pos[1] << " 0\n";
  }

  const int nc = mesh.n_active();
  out << "CELLS " << nc << ' ' << nc * 5 << '\n';
  for (int row = 0; row < nc; ++row) {
    const int32_t* q1 = dm.cell_q1.data() + static_cast<size_t>(row) * 4;
    out << "4 " << q1[0] << ' ' << q1[1] << ' ' << q1[3] << ' ' << q1[2]
        << '\n';
  }
  out << "CELL_TYPES " << nc << '\n';
  for (int row = 0; row < nc; ++row) out << "9\n";

  // Corner values: every Q1 lattice key is also a Q2 node.
  std::unordered_map<uint64_t, int64_t> q2_of;
  q2_of.reserve(dm.nq2);
  for (int64_t i = 0; i < dm.nq2; ++i) q2_of[key_hash(dm.q2_key[i])] = i;

  out << "POINT_DATA " << dm.nq1 << '\n';
  if (dm.fields.director) {
    out << "VECTORS director double\n";
    for (int64_t i = 0; i < dm.nq1; ++i) {
      const int64_t n = q2_of.at(key_hash(dm.q1_key[i]));
      out << data.raw[dm.dof(Field::n1, n)] << ' '
          << data.raw[dm.dof(Field::n2, n)] << ' '
          << data.raw[dm.dof(Field::n3, n)] << '\n';
    }
    out << "SCALARS unit_deviation double 1\nLOOKUP_TABLE default\n";
    for (int64_t i = 0; i < dm.nq1; ++i) {
      const int64_t n = q2_of.at(key_hash(dm.q1_key[i]));
      const double a = data.raw[dm.dof(Field::n1, n)];
      const double b = data.raw[dm.dof(Field::n2, n)];
      const double c = data.raw[dm.dof(Field::n3, n)];
      out << std::sqrt(a * a + b * b + c * c) - 1.0 << '\n';
    }
  }
  if (dm.fields.potential) {
    out << "SCALARS potential double 1\nLOOKUP_TABLE default\n";
    for (int64_t i = 0; i < dm.nq1; ++i) {
      const int64_t n = q2_of.at(key_hash(dm.q1_key[i]));
      out << data.raw[dm.dof(Field::phi, n)] << '\n';
    }
  }
  if (dm.fields.multiplier) {
    out << "SCALARS multiplier double 1\nLOOKUP_TABLE default\n";
    for (int64_t i = 0; i < dm.nq1; ++i)
      out << data.raw[dm.dof(Field::lambda, i)] << '\n';
  }

  if (lr && !lr->locals.empty()) {
    out << "CELL_DATA " << nc << '\n';
    out << "SCALARS estimator double 1\nLOOKUP_TABLE default\n";
    for (const LocalEstimate& le : lr->locals) out << le.theta() << '\n';
    if (!lr->h1_cells2.empty()) {
      out << "SCALARS h1_error double 1\nLOOKUP_TABLE default\n";
      for (double e2 : lr->h1_cells2) out << std::sqrt(e2) << '\n';
    }
  }
}

void write_matrix_market(const std::string& path, const SparseMat& A) {
  auto out = open_out(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMat::InnerIterator it(A, k); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

void write_failure(const std::string& dir, const std::string& message) {
  auto out = open_out(dir + "/failure.txt");
  out << message << '\n';
}

}  // namespace lcamr
