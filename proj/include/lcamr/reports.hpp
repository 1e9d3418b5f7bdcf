#pragma once

#include <string>

#include "lcamr/newton.hpp"
#include "lcamr/runconfig.hpp"

namespace lcamr {

bool ensure_directory(const std::string& dir);

// report.csv (one row per level), work_ledger.csv, summary.txt. Timing
// appears only in summary.txt so the CSVs are rerun-stable byte for byte.
void write_run_artifacts(const std::string& dir, const RunConfig& cfg,
                         const RunReport& report);

// estimator_cells_levelN.csv and distribution_levelN.csv for one level.
void write_level_artifacts(const std::string& dir, const LevelReport& lr,
                           const LevelData& data);

// Legacy ASCII VTK snapshot on the active mesh corners. Point data: n,
// phi, lambda, |n|-1 (fields the state carries); cell data from lr when
// given: estimator and per-cell H1 error.
void write_vtk(const std::string& path, const LevelData& data,
               const LevelReport* lr);

// Coordinate-format Matrix Market export.
void write_matrix_market(const std::string& path, const SparseMat& A);

// failure.txt holding a machine-readable one-line reason.
void write_failure(const std::string& dir, const std::string& message);

}  // namespace lcamr
