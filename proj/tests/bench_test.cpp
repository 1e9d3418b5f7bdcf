#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "lcamr/problems.hpp"

using namespace lcamr;

namespace {

// Interpolant of the exact benchmark director on a uniform grid.
struct Interp {
  Mesh mesh;
  DofMap dm;
  ConstraintSet cs;
  FieldState st;
};

void build_interpolant(Interp& in, const Problem& prob, int m) {
  in.mesh = uniform_mesh(m, m);
  in.dm = build_dofmap(in.mesh, prob.fields);
  in.cs = build_constraints(in.mesh, in.dm, active_edges(in.mesh),
                            prob.boundary);
  in.st.mesh = &in.mesh;
  in.st.dm = &in.dm;
  in.st.cs = &in.cs;
  in.st.params = prob.params;
  in.st.raw = Eigen::VectorXd::Zero(in.dm.total);
  for (int64_t i = 0; i < in.dm.nq2; ++i) {
    const auto pos = in.dm.node_pos(in.dm.q2_key[i], in.mesh.domain);
    const Eigen::Vector3d n = prob.exact_director(pos[0], pos[1]);
    in.st.raw[in.dm.dof(Field::n1, i)] = n[0];
    in.st.raw[in.dm.dof(Field::n2, i)] = n[1];
    in.st.raw[in.dm.dof(Field::n3, i)] = n[2];
  }
}

}  // namespace

TEST_SUITE_BEGIN("bench");

TEST_CASE("spiral director hits its anchor points") {
  // Unit distance from the center: zero winding angle.
  const Eigen::Vector3d at_r1 = benchmark_director(0.5, 0.9);
  CHECK(at_r1[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at_r1[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(at_r1[2] == 0.0);
  // Quarter turn: r = 10^(-pi/9) on the vertical through the center.
  const double y = std::pow(10.0, -M_PI / 9.0) - 0.1;
  const Eigen::Vector3d quarter = benchmark_director(0.5, y);
  CHECK(quarter[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(quarter[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(y == doctest::Approx(0.3476454243).epsilon(1e-9));
}

TEST_CASE("spiral director is a unit field") {
  std::mt19937 rng(8u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = unit(rng), yy = unit(rng);
    CHECK(benchmark_director(x, yy).norm() ==
          doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("spiral gradient matches finite differences") {
  std::mt19937 rng(9u);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const double x = unit(rng), y = unit(rng);
    const auto grad = benchmark_director_gradient(x, y);
    const Eigen::Vector3d dx =
        (benchmark_director(x + h, y) - benchmark_director(x - h, y)) /
        (2.0 * h);
    const Eigen::Vector3d dy =
        (benchmark_director(x, y + h) - benchmark_director(x, y - h)) /
        (2.0 * h);
    for (int i = 0; i < 3; ++i) {
      CHECK(grad(i, 0) == doctest::Approx(dx[i]).epsilon(1e-5));
      CHECK(grad(i, 1) == doctest::Approx(dy[i]).epsilon(1e-5));
    }
  }
}

TEST_CASE("elastic benchmark problem carries its reference data") {
  const Problem prob = elastic_benchmark_problem(Formulation::penalty, 1e8);
  CHECK(prob.has_exact);
  CHECK(prob.exact_energy == doctest::Approx(8.7174028130).epsilon(1e-12));
  CHECK(prob.params.K1 == 1.0);
  CHECK(prob.params.K2 == 1.0);
  CHECK(prob.params.K3 == 1.0);
  CHECK(!prob.params.electric);
  CHECK(prob.params.zeta == 1e8);
  // Dirichlet data and analytic start agree with the exact field.
  const auto bd = prob.boundary.director(0.3, 0.0);
  const Eigen::Vector3d ex = prob.exact_director(0.3, 0.0);
  CHECK(bd[0] == doctest::Approx(ex[0]).epsilon(1e-14));
  CHECK(bd[1] == doctest::Approx(ex[1]).epsilon(1e-14));
  const auto init = prob.initial_director(0.4, 0.6);
  const Eigen::Vector3d exi = prob.exact_director(0.4, 0.6);
  CHECK(init[0] == doctest::Approx(exi[0]).epsilon(1e-14));

  const Problem cold = elastic_benchmark_problem(Formulation::penalty, 1e8,
                                                 /*analytic_initial=*/false);
  const auto up = cold.initial_director(0.4, 0.6);
  CHECK(up[0] == 0.0);
  CHECK(up[1] == 0.0);
  CHECK(up[2] == 1.0);
}

TEST_CASE("interpolant energies approach the reference value") {
  const Problem prob = elastic_benchmark_problem(Formulation::penalty, 0.0);
  double err_prev = 1e300;
  for (int m : {32, 64, 128}) {
    Interp in;
    build_interpolant(in, prob, m);
    const double err =
        std::abs(assemble_energy(in.st, false) - prob.exact_energy);
    CHECK(err < err_prev);
    err_prev = err;
  }
  CHECK(err_prev < 1e-2);
}

TEST_CASE("interpolation error drops at second order") {
  const Problem prob = elastic_benchmark_problem(Formulation::penalty, 0.0);
  Interp a, b;
  build_interpolant(a, prob, 32);
  build_interpolant(b, prob, 64);
  const double e32 = h1_error(a.st, prob).global;
  const double e64 = h1_error(b.st, prob).global;
  CHECK(e64 < e32);
  const double rate = std::log2(e32 / e64);
  CHECK(rate > 1.7);
  CHECK(rate < 2.3);

  H1Error detail = h1_error(b.st, prob);
  double sum = 0.0;
  for (double c : detail.cell2) sum += c;
  CHECK(std::sqrt(sum) == doctest::Approx(detail.global).epsilon(1e-13));
}

TEST_CASE("error evaluation requires an exact solution") {
  const Problem prob = flexo_problem(Formulation::penalty, 1e5);
  CHECK(!prob.has_exact);
  Interp in;
  in.mesh = uniform_mesh(2, 2);
  in.dm = build_dofmap(in.mesh, prob.fields);
  in.cs = build_constraints(in.mesh, in.dm, active_edges(in.mesh),
                            prob.boundary);
  in.st.mesh = &in.mesh;
  in.st.dm = &in.dm;
  in.st.cs = &in.cs;
  in.st.params = prob.params;
  in.st.raw = Eigen::VectorXd::Zero(in.dm.total);
  CHECK_THROWS_AS(h1_error(in.st, prob), std::logic_error);
}

TEST_CASE("coupled problem preset") {
  const Problem prob = flexo_problem(Formulation::lagrangian, 0.0);
  CHECK(prob.params.K1 == doctest::Approx(1.0));
  CHECK(prob.params.K2 == doctest::Approx(0.62903));
  CHECK(prob.params.K3 == doctest::Approx(1.32258));
  CHECK(prob.params.eps0 == doctest::Approx(1.42809));
  CHECK(prob.params.eps_perp == doctest::Approx(7.0));
  CHECK(prob.params.eps_a == doctest::Approx(11.5));
  CHECK(prob.params.e_s == doctest::Approx(1.5));
  CHECK(prob.params.e_b == doctest::Approx(-1.5));
  CHECK(prob.params.electric);
  CHECK(prob.fields.potential);
  CHECK(prob.fields.multiplier);

  // Potential data: smoothed pulse on the top wall only.
  CHECK(prob.boundary.potential(0.5, 1.0) == doctest::Approx(1.5).epsilon(1e-4));
  CHECK(std::abs(prob.boundary.potential(0.05, 1.0)) < 1e-6);
  CHECK(prob.boundary.potential(0.5, 0.999999) == 0.0);
  CHECK(prob.boundary.potential(0.5, 0.0) == 0.0);
  const auto wall_n = prob.boundary.director(0.7, 0.0);
  CHECK(wall_n[2] == 1.0);
  // Unit start tilted off the n = e_z saddle, toward the field.
  const auto n0 = prob.initial_director(0.3, 0.3);
  CHECK(n0[0] == 0.0);
  CHECK(n0[1] > 0.0);
  CHECK(n0[0] * n0[0] + n0[1] * n0[1] + n0[2] * n0[2] ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(n0[1] / n0[2] == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("distribution curve of a worked example") {
  const DistributionCurve c = distribution_curve({2.0, 1.0, 1.0});
  REQUIRE(c.frac_cells.size() == 3u);
  CHECK(c.frac_cells[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(c.frac_total[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.frac_total[1] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(c.frac_total[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c.area() == doctest::Approx(1.75 / 3.0).epsilon(1e-14));

  // A perfectly even field gives the smallest possible area.
  const DistributionCurve flat = distribution_curve({1.0, 1.0, 1.0, 1.0});
  CHECK(flat.area() < c.area());
  CHECK_THROWS_AS(distribution_curve({}), std::invalid_argument);
  CHECK_THROWS_AS(distribution_curve({0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(distribution_curve({1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("effectivity ratios") {
  const auto eff = effectivity({10.0, 5.0}, {2.0, 1.0});
  REQUIRE(eff.size() == 2u);
  CHECK(eff[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(eff[1] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK_THROWS_AS(effectivity({1.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(effectivity({1.0}, {0.0}), std::invalid_argument);
}

TEST_SUITE_END();
