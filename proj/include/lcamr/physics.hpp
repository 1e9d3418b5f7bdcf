#pragma once

#include <Eigen/Dense>

namespace lcamr {

// How the unit-length condition on the director enters the functional.
enum class Formulation { penalty, lagrangian };

struct MaterialParams {
  double K1 = 1.0, K2 = 1.0, K3 = 1.0;  // splay, twist, bend
  double eps0 = 1.0;                    // vacuum permittivity
  double eps_perp = 0.0, eps_a = 0.0;   // relative permittivity, anisotropy
  double e_s = 0.0, e_b = 0.0;          // flexoelectric coefficients
  double zeta = 0.0;                    // penalty weight
  bool electric = false;                // potential field present
  Formulation formulation = Formulation::penalty;

  double kappa() const { return K2 / K3; }
};

// Pointwise unknowns of the planar model: fields depend on (x, y) only while
// vectors keep three components, so every gradient has a zero z slot.
// Second derivatives are stored per component as (xx, xy, yy).
struct PointState {
  Eigen::Vector3d n = Eigen::Vector3d::Zero();
  Eigen::Matrix<double, 3, 2> grad_n = Eigen::Matrix<double, 3, 2>::Zero();
  Eigen::Matrix3d sec_n = Eigen::Matrix3d::Zero();  // row: component
  Eigen::Vector3d grad_phi = Eigen::Vector3d::Zero();
  Eigen::Vector3d sec_phi = Eigen::Vector3d::Zero();  // (xx, xy, yy)
  double lambda = 0.0;
};

double director_divergence(const PointState& s);
Eigen::Vector3d director_curl(const PointState& s);

// Twist anisotropy tensor I - (1 - kappa) n (x) n.
Eigen::Matrix3d z_tensor(const Eigen::Vector3d& n, double kappa);

// Equilibrium free energy density (no unit-length device).
double energy_density(const MaterialParams& mp, const PointState& s);
// Energy density plus the penalty or multiplier term.
double augmented_energy_density(const MaterialParams& mp, const PointState& s);

// Test direction for the variational forms; unused slots stay zero.
struct TestFn {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Vector3d curl_v = Eigen::Vector3d::Zero();
  Eigen::Vector3d grad_psi = Eigen::Vector3d::Zero();
  double div_v = 0.0;
  double gamma = 0.0;
};

// Coefficients of the first variation:
//   dL[v]     = s_n . v + s_div (div v) + s_curl . curl v
//   dL[psi]   = d_phi . grad psi
//   dL[gamma] = s_lambda gamma
// d_phi equals the electric displacement.
struct Stress {
  Eigen::Vector3d s_n = Eigen::Vector3d::Zero();
  Eigen::Vector3d s_curl = Eigen::Vector3d::Zero();
  Eigen::Vector3d d_phi = Eigen::Vector3d::Zero();
  double s_div = 0.0;
  double s_lambda = 0.0;
};
Stress first_variation(const MaterialParams& mp, const PointState& s);

double first_variation_apply(const Stress& st, const TestFn& t);

// State quantities shared by every second-variation pair at one point.
struct PointContext {
  Eigen::Vector3d n, c, grad_phi;
  double d = 0.0;       // div n
  double t = 0.0;       // n . curl n
  double f = 0.0;       // n . grad phi
  double nn1 = 0.0;     // n . n - 1
  double lambda = 0.0;
};
PointContext make_context(const PointState& s);

double second_variation(const MaterialParams& mp, const PointContext& ctx,
                        const TestFn& a, const TestFn& b);

// Interior residuals of the strong Euler-Lagrange system, needing second
// derivatives of the state.
struct StrongResidual {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  double q = 0.0;
};
StrongResidual strong_residuals(const MaterialParams& mp, const PointState& s);

Eigen::Vector3d electric_displacement(const MaterialParams& mp,
                                      const PointState& s);
// div D, expanded independently of strong_residuals; q == -div D.
double displacement_divergence(const MaterialParams& mp, const PointState& s);

// Single-side boundary terms of the first variation against a unit normal:
//   p_hat = s_div eta + s_curl x eta,  q_hat = D . eta.
struct SideFlux {
  Eigen::Vector3d p_hat = Eigen::Vector3d::Zero();
  double q_hat = 0.0;
};
SideFlux side_flux(const MaterialParams& mp, const PointState& s,
                   const Eigen::Vector3d& normal);

}  // namespace lcamr
