#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lcamr/estimator.hpp"

namespace lcamr {

enum class Marking { fixed, bandwidth, dorfler };

Marking parse_marking(const std::string& name);  // throws on unknown name
const char* marking_name(Marking m);

// All three return indices into theta, ascending. theta must be nonempty
// and nu in (0,1); violations throw std::invalid_argument.
//
// fixed: the ceil(nu * size) largest indicators, ties resolved toward the
// smaller index.
std::vector<int> mark_fixed(const std::vector<double>& theta, double nu);
// bandwidth: every index with theta >= (1 - nu) * max(theta). All-zero
// input therefore marks everything.
std::vector<int> mark_bandwidth(const std::vector<double>& theta, double nu);
// dorfler: minimal descending-order prefix with sum of theta^2 at least
// (1 - nu) times the total. All-zero input yields an empty set.
std::vector<int> mark_dorfler(const std::vector<double>& theta, double nu);

std::vector<int> mark(Marking strategy, const std::vector<double>& theta,
                      double nu);

// Convenience: indicator list from local estimates, marked rows mapped back
// to active cell ids for refine().
std::vector<int32_t> mark_cells(const std::vector<LocalEstimate>& locals,
                                Marking strategy, double nu);

// Hessian nonzero counts per Newton step across a run, and the work-unit
// ratio against a reference matrix.
struct WorkLedger {
  struct Entry {
    int level = 0;
    int step = 0;
    int64_t nnz = 0;
  };
  std::vector<Entry> entries;

  void record(int level, int step, int64_t nnz) {
    entries.push_back({level, step, nnz});
  }
  int64_t total_nnz() const;
  // (sum of recorded nnz) / reference; throws if reference <= 0.
  double work_units(int64_t reference_nnz) const;
};

}  // namespace lcamr
