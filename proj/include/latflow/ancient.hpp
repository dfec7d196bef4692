#pragma once

#include <vector>

#include "latflow/duhamel.hpp"
#include "latflow/functional.hpp"
#include "latflow/spectral.hpp"

namespace latflow {

struct AncientOptions {
  double T_max = 10.0;
  double dt = 1e-3;
  double delta0 = 0.5;    // weighted-norm decay rate, must lie in (0, -lambda_I)
  double theta = 0.5;     // Hoelder exponent of the convergence norm
  double tol = 1e-10;     // successive-iterate stopping distance
  int max_iterations = 50;
  double eta = 0.3;       // empirical convergence radius for |a|
  double tail_tol = 1e-7;
};

/// Ancient solution tangent to the unstable eigenspace, produced by Picard
/// iteration u^{k+1} = solve_linear_ancient(a, remainder(u^k)).
struct AncientSolution {
  FlowTrajectory traj;
  Vector a;
  double delta0 = 0.0;
  int iterations = 0;
  std::vector<double> iteration_distances;  // weighted-norm distance per step
  double weighted_distance = 0.0;           // ||u - iota_-(a)||_{C^{2,theta,delta0}}
};

/// The trajectory t -> iota_-(a)(., t) on [-T_max, 0].
FlowTrajectory iota_trajectory(const EigenSystem& es, const Vector& a, double T_max,
                               double dt);

AncientSolution construct_ancient(const GradientSplit& split, const EigenSystem& es,
                                  const Vector& a, const AncientOptions& opts = {});

struct TangencyReport {
  std::vector<double> scales;
  std::vector<double> deviations;  // sup_t L2 of (S(sa)-S(-sa))/(2s) - iota_-(a)
  double fitted_order = 0.0;       // log-log slope
  double first_ratio = 0.0;        // deviation(s_0) / deviation(s_1)
};

TangencyReport tangency_check(const GradientSplit& split, const EigenSystem& es,
                              const Vector& a_direction, const std::vector<double>& scales,
                              const AncientOptions& opts = {});

struct EnvelopeReport {
  std::vector<double> a_norms;
  std::vector<double> distances;  // weighted distances per solution
  double mu = 0.0;                // max distance / |a|^2
  double ratio_spread = 0.0;      // max over min of distance / |a|^2
};

EnvelopeReport verify_quadratic_envelope(const std::vector<AncientSolution>& sols);

}  // namespace latflow
