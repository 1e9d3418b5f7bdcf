#include "lcamr/marking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lcamr {

namespace {

void check_input(const std::vector<double>& theta, double nu) {
  if (theta.empty())
    throw std::invalid_argument("marking: empty indicator list");
  if (!(nu > 0.0 && nu < 1.0))
    throw std::invalid_argument("marking: nu must lie in (0,1)");
}

// Indices sorted by descending indicator, ties toward the smaller index.
std::vector<int> descending_order(const std::vector<double>& theta) {
  std::vector<int> order(theta.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&theta](int a, int b) { return theta[a] > theta[b]; });
  return order;
}

}  // namespace

Marking parse_marking(const std::string& name) {
  if (name == "fixed") return Marking::fixed;
  if (name == "bandwidth") return Marking::bandwidth;
  if (name == "dorfler") return Marking::dorfler;
  throw std::invalid_argument("unknown marking strategy: " + name);
}

const char* marking_name(Marking m) {
  switch (m) {
    case Marking::fixed: return "fixed";
    case Marking::bandwidth: return "bandwidth";
    default: return "dorfler";
  }
}

std::vector<int> mark_fixed(const std::vector<double>& theta, double nu) {
  check_input(theta, nu);
  const auto order = descending_order(theta);
  const size_t count = static_cast<size_t>(
      std::ceil(nu * static_cast<double>(theta.size())));
  std::vector<int> out(order.begin(), order.begin() + count);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> mark_bandwidth(const std::vector<double>& theta, double nu) {
  check_input(theta, nu);
  const double cutoff = (1.0 - nu) * *std::max_element(theta.begin(), theta.end());
  std::vector<int> out;
  for (size_t i = 0; i < theta.size(); ++i)
    if (theta[i] >= cutoff) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> mark_dorfler(const std::vector<double>& theta, double nu) {
  check_input(theta, nu);
  double total = 0.0;
  for (double t : theta) total += t * t;
  const double target = (1.0 - nu) * total;
  const auto order = descending_order(theta);
  std::vector<int> out;
  double sum = 0.0;
  for (int i : order) {
    if (sum >= target) break;
    out.push_back(i);
    sum += theta[i] * theta[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> mark(Marking strategy, const std::vector<double>& theta,
                      double nu) {
  switch (strategy) {
    case Marking::fixed: return mark_fixed(theta, nu);
    case Marking::bandwidth: return mark_bandwidth(theta, nu);
    default: return mark_dorfler(theta, nu);
  }
}

std::vector<int32_t> mark_cells(const std::vector<LocalEstimate>& locals,
                                Marking strategy, double nu) {
  std::vector<double> theta(locals.size());
  for (size_t i = 0; i < locals.size(); ++i) theta[i] = locals[i].theta();
  std::vector<int32_t> cells;
  for (int row : mark(strategy, theta, nu)) cells.push_back(locals[row].cell);
  return cells;
}

int64_t WorkLedger::total_nnz() const {
  int64_t sum = 0;
  for (const Entry& e : entries) sum += e.nnz;
  return sum;
}

double WorkLedger::work_units(int64_t reference_nnz) const {
  if (reference_nnz <= 0)
    throw std::invalid_argument("work_units: reference nnz must be positive");
  return static_cast<double>(total_nnz()) /
         static_cast<double>(reference_nnz);
}

}  // namespace lcamr
