#include "lcamr/basis.hpp"

#include <cassert>

namespace lcamr {

// 1D Lagrange values; out has node_count_1d entries ordered by coordinate.
void line_values(Degree d, double t, double* out) {
  if (d == Degree::q1) {
    out[0] = 1.0 - t;
    out[1] = t;
  } else {
    out[0] = (2.0 * t - 1.0) * (t - 1.0);
    out[1] = 4.0 * t * (1.0 - t);
    out[2] = t * (2.0 * t - 1.0);
  }
}

namespace {

inline void line_derivs(Degree d, double t, double* out) {
  if (d == Degree::q1) {
    out[0] = -1.0;
    out[1] = 1.0;
  } else {
    out[0] = 4.0 * t - 3.0;
    out[1] = 4.0 - 8.0 * t;
    out[2] = 4.0 * t - 1.0;
  }
}

inline void line_second_derivs(Degree d, double* out) {
  if (d == Degree::q1) {
    out[0] = out[1] = 0.0;
  } else {
    out[0] = 4.0;
    out[1] = -8.0;
    out[2] = 4.0;
  }
}

}  // namespace

std::array<double, 2> node_position(Degree d, int local_node) {
  const int n1 = node_count_1d(d);
  assert(local_node >= 0 && local_node < n1 * n1);
  const int ix = local_node % n1;
  const int iy = local_node / n1;
  const double step = 1.0 / (n1 - 1);
  return {ix * step, iy * step};
}

void eval_values(Degree d, double x, double y, double* values) {
  double lx[3], ly[3];
  line_values(d, x, lx);
  line_values(d, y, ly);
  const int n1 = node_count_1d(d);
  for (int iy = 0; iy < n1; ++iy)
    for (int ix = 0; ix < n1; ++ix) values[iy * n1 + ix] = lx[ix] * ly[iy];
}

void eval_gradients(Degree d, double x, double y, double (*grads)[2]) {
  double lx[3], ly[3], dx[3], dy[3];
  line_values(d, x, lx);
  line_values(d, y, ly);
  line_derivs(d, x, dx);
  line_derivs(d, y, dy);
  const int n1 = node_count_1d(d);
  for (int iy = 0; iy < n1; ++iy)
    for (int ix = 0; ix < n1; ++ix) {
      grads[iy * n1 + ix][0] = dx[ix] * ly[iy];
      grads[iy * n1 + ix][1] = lx[ix] * dy[iy];
    }
}

void eval_hessians(Degree d, double x, double y, double (*hess)[3]) {
  double lx[3], ly[3], dx[3], dy[3], sx[3], sy[3];
  line_values(d, x, lx);
  line_values(d, y, ly);
  line_derivs(d, x, dx);
  line_derivs(d, y, dy);
  line_second_derivs(d, sx);
  line_second_derivs(d, sy);
  const int n1 = node_count_1d(d);
  for (int iy = 0; iy < n1; ++iy)
    for (int ix = 0; ix < n1; ++ix) {
      hess[iy * n1 + ix][0] = sx[ix] * ly[iy];
      hess[iy * n1 + ix][1] = dx[ix] * dy[iy];
      hess[iy * n1 + ix][2] = lx[ix] * sy[iy];
    }
}

ShapeTable tabulate_basis(Degree d, const std::vector<double>& x,
                          const std::vector<double>& y) {
  assert(x.size() == y.size());
  ShapeTable t;
  t.degree = d;
  t.nb = node_count(d);
  t.npoints = static_cast<int>(x.size());
  const int total = t.nb * t.npoints;
  t.value.resize(total);
  t.dx.resize(total);
  t.dy.resize(total);
  t.dxx.resize(total);
  t.dxy.resize(total);
  t.dyy.resize(total);
  double g[9][2], h[9][3];
  for (int p = 0; p < t.npoints; ++p) {
    eval_values(d, x[p], y[p], t.value.data() + p * t.nb);
    eval_gradients(d, x[p], y[p], g);
    eval_hessians(d, x[p], y[p], h);
    for (int k = 0; k < t.nb; ++k) {
      t.dx[p * t.nb + k] = g[k][0];
      t.dy[p * t.nb + k] = g[k][1];
      t.dxx[p * t.nb + k] = h[k][0];
      t.dxy[p * t.nb + k] = h[k][1];
      t.dyy[p * t.nb + k] = h[k][2];
    }
  }
  return t;
}

}  // namespace lcamr
