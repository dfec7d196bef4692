#pragma once

#include <functional>

#include "latflow/spectral.hpp"
#include "latflow/trajectory.hpp"

namespace latflow {

/// Forcing h(theta, t) for t <= 0 with a decay certificate: delta > 0 such
/// that e^{-delta t} ||h(., t)||_{L2} stays below `bound`. bound <= 0 means
/// "measure it from the samples".
struct Forcing {
  std::function<double(double, double)> evaluator;
  double delta = 0.0;
  double bound = 0.0;
};

/// Solution of du/dt = L u + h on [-T_max, 0] with prescribed unstable data.
/// Unstable modes integrate backward from their value at t = 0; stable and
/// neutral modes integrate the semi-infinite formula with an analytic tail
/// estimate below `tail_bound`.
struct LinearAncientSolution {
  FlowTrajectory traj;
  Vector a;            // unstable data
  Matrix coeffs;       // mode x time coefficients u_j(t_i)
  Matrix forcing;      // sampled h on the same grid (n x nt)
  double delta = 0.0;  // forcing decay certificate
  double bound = 0.0;  // measured/declared forcing bound
  double tail_bound = 0.0;
};

LinearAncientSolution solve_linear_ancient(const EigenSystem& es, const Vector& a,
                                           const Forcing& h, double T_max, double dt,
                                           double tail_tol = 1e-8);

/// Same, with the forcing already sampled on the trajectory grid
/// (column i is h(., -T_max + i dt)).
LinearAncientSolution solve_linear_ancient_sampled(const EigenSystem& es,
                                                   const Vector& a, const Matrix& H,
                                                   double delta, double bound,
                                                   double T_max, double dt,
                                                   double tail_tol = 1e-8);

struct LinearBoundReport {
  double lhs_max = 0.0;  // sup_t e^{-delta' t} ||u - iota_-(a)||_{L2}
  double rhs = 0.0;      // [ int |e^{-delta tau} ||h|| |^2 dtau ]^{1/2}
  double c = 0.0;        // empirical constant lhs_max / rhs
};

LinearBoundReport verify_linear_bound(const EigenSystem& es,
                                      const LinearAncientSolution& sol,
                                      double delta_prime);

/// Max over interior times of ||du/dt - L u - h||_{L2} (centered in time).
double linear_residual(const DiscreteOperator& L, const LinearAncientSolution& sol);

}  // namespace latflow
