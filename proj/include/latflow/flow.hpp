#pragma once

#include <vector>

#include "latflow/functional.hpp"
#include "latflow/spectral.hpp"
#include "latflow/trajectory.hpp"

namespace latflow {

/// Forward IMEX time stepping of du/dt = gradient(u): the linear part L is
/// treated with Crank-Nicolson (cached factorization), the quadratically
/// small remainder explicitly (AB2 after a trapezoidal first step).
/// Stops early with a status flag on graphicality loss or blow-up.
FlowTrajectory evolve(const GradientSplit& split, const Field& u0, double t0,
                      double t1, double dt);

/// Latitude circles under the parametric flow reduce to dphi/dt = tan(phi).
struct LatitudeTrajectory {
  std::vector<double> times;
  std::vector<double> phis;
  bool extinct = false;
  double extinction_time = 0.0;
};

LatitudeTrajectory evolve_parametric_latitude(double phi0, double t0, double t1,
                                              double dt);

/// Projection energies U_-(t), U_0(t), U_+(t) and the C^2 gauge sigma(t).
struct ModeEnergySeries {
  std::vector<double> times;
  std::vector<double> u_minus, u_zero, u_plus;
  std::vector<double> sigma;  // discrete C2 norm
  std::vector<double> l2;     // ||u(., t)||_{L2}
  double lambda_I = 0.0;      // last unstable eigenvalue
  double lambda_next = 0.0;   // first strictly stable eigenvalue
};

ModeEnergySeries mode_energies(const EigenSystem& es, const FlowTrajectory& traj);

struct DecayFit {
  double rate = 0.0;      // slope of log sigma(t)
  double residual = 0.0;  // rms of the fit relative to the data range
};

DecayFit fit_decay_rate(const ModeEnergySeries& series, double t_a, double t_b);

struct CaccioppoliReport {
  bool applicable = false;
  double max_ratio = 0.0;  // max_t ||u||_{W^{1,2}} / ||u||_{L2}
};

CaccioppoliReport check_caccioppoli(const FlowTrajectory& traj,
                                    double c1_smallness = 0.2);

struct ModeInequalityReport {
  double c_unstable = 0.0;  // d/dt U_- + lambda_I U_- >= -c sigma ||u||
  double c_neutral = 0.0;   // |d/dt U_0| <= c sigma ||u||
  double c_stable = 0.0;    // d/dt U_+ + lambda_{I+K+1} U_+ <= c sigma ||u||
};

ModeInequalityReport verify_mode_inequalities(const ModeEnergySeries& series,
                                              double eps_floor = 1e-12);

struct EnergyIdentityReport {
  double delta_energy = 0.0;     // A(t1) - A(t0)
  double dissipation = 0.0;      // int ||du/dt||^2 dt
  double relative_residual = 0.0;
  double max_increase = 0.0;     // largest uphill step of A along the flow
};

EnergyIdentityReport energy_identity(const EllipticFunctional& F,
                                     const FlowTrajectory& traj);

/// Max over interior times of ||du/dt - gradient(u)||_{L2}.
double flow_residual(const EllipticFunctional& F, const FlowTrajectory& traj);

/// int sup_theta |u| dt over the trajectory.
double l1_time_norm(const FlowTrajectory& traj);

}  // namespace latflow
