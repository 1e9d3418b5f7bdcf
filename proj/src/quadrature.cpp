#include "lcamr/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace lcamr {

namespace {

// Abscissae/weights on (-1,1), positive half only; mirrored below.
struct HalfRule {
  const double* x;
  const double* w;
  int n;       // entries in the half table
  bool has_center;
};

const double x1[] = {0.0};
const double w1[] = {2.0};
const double x2[] = {0.5773502691896257};
const double w2[] = {1.0};
const double x3[] = {0.0, 0.7745966692414834};
const double w3[] = {0.8888888888888888, 0.5555555555555556};
const double x4[] = {0.3399810435848563, 0.8611363115940526};
const double w4[] = {0.6521451548625461, 0.3478548451374538};
const double x5[] = {0.0, 0.5384693101056831, 0.9061798459386640};
const double w5[] = {0.5688888888888889, 0.4786286704993665, 0.2369268850561891};
const double x6[] = {0.2386191860831969, 0.6612093864662645, 0.9324695142031521};
const double w6[] = {0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

const HalfRule half_rules[] = {
    {x1, w1, 1, true},  {x2, w2, 1, false}, {x3, w3, 2, true},
    {x4, w4, 2, false}, {x5, w5, 3, true},  {x6, w6, 3, false},
};

}  // namespace

QuadratureRule1D gauss_rule_1d(int npoints) {
  if (npoints < 1 || npoints > 6)
    throw std::invalid_argument("gauss_rule_1d: point count " +
                                std::to_string(npoints) +
                                " outside supported range [1,6]");
  const HalfRule& hr = half_rules[npoints - 1];
  QuadratureRule1D rule;
  rule.points.reserve(npoints);
  rule.weights.reserve(npoints);
  for (int i = hr.n - 1; i >= 0; --i) {
    if (hr.x[i] == 0.0) continue;
    rule.points.push_back(0.5 * (1.0 - hr.x[i]));
    rule.weights.push_back(0.5 * hr.w[i]);
  }
  if (hr.has_center) {
    rule.points.push_back(0.5);
    rule.weights.push_back(0.5 * hr.w[0]);
  }
  for (int i = 0; i < hr.n; ++i) {
    if (hr.x[i] == 0.0) continue;
    rule.points.push_back(0.5 * (1.0 + hr.x[i]));
    rule.weights.push_back(0.5 * hr.w[i]);
  }
  return rule;
}

QuadratureRule2D gauss_rule_2d(int npoints_per_direction) {
  QuadratureRule1D r1 = gauss_rule_1d(npoints_per_direction);
  QuadratureRule2D rule;
  const int n = npoints_per_direction;
  rule.x.reserve(n * n);
  rule.y.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      rule.x.push_back(r1.points[i]);
      rule.y.push_back(r1.points[j]);
      rule.weights.push_back(r1.weights[i] * r1.weights[j]);
    }
  return rule;
}

}  // namespace lcamr
