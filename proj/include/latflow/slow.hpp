#pragma once

#include <functional>
#include <string>
#include <vector>

namespace latflow {

/// Time-of-arrival data for a rotationally symmetric warped metric: tau maps
/// the distance s in (0,1] from the central geodesic to the (nonpositive)
/// time at which the flowing latitude circle sits at that distance.
struct ArrivalFunction {
  std::string name;
  std::function<double(double)> tau;        // (0,1] -> (-inf, 0]
  std::function<double(double)> tau_prime;  // > 0
  double s_min = 0.0;  // > 0 for tabulated data with finite range
};

ArrivalFunction builtin_arrival(const std::string& name);  // exp | poly | sublog

/// Monotone two-column table (s, tau) -> piecewise-cubic arrival function.
ArrivalFunction tabulated_arrival(const std::vector<double>& s,
                                  const std::vector<double>& tau);

/// Throws inadmissible-arrival errors naming the failed check:
/// tau'(s) > 0 on samples, tau(1) = 0, tau(0+) = -inf, integral of 1/tau'
/// finite near 0.
void check_admissible(const ArrivalFunction& arr);

/// Warping function of g = ds^2 + e^{2f} dtheta^2.  The orientation is chosen
/// so the latitude flow below arrives at distance s at time tau(s): the
/// central geodesic is unstable and f(s) = -int_0^s dsigma / tau'(sigma).
struct WarpedMetric {
  ArrivalFunction arrival;
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  double f_total = 0.0;  // |f(1)|, the admissibility integral
};

WarpedMetric build_warping(const ArrivalFunction& arr);

struct ScalarTrajectory {
  std::vector<double> times;
  std::vector<double> s;
  bool left_domain = false;  // truncated on exiting (0, 1]
};

/// Integrates ds/dt = 1 / tau'(s) with classical RK4.
ScalarTrajectory latitude_flow(const WarpedMetric& metric, double s0, double t0,
                               double t1, double dt);

struct ArrivalReport {
  double shift = 0.0;     // best constant c in t(s) ~ tau(s) + c
  double residual = 0.0;  // sup |t - tau(s(t)) - shift|
};

ArrivalReport arrival_time_check(const ScalarTrajectory& traj,
                                 const ArrivalFunction& arr);

struct L1Audit {
  std::vector<double> horizons;   // increasing T
  std::vector<double> integrals;  // int_{-T}^0 s(t) dt
  bool convergent = false;
  double growth_exponent = 0.0;   // fitted d log(integral) / d log(T)
  double log_fit_residual = 0.0;  // relative residual of integral ~ a + b log T
};

/// Classifies the spacetime L^1 size of the trajectory over growing horizons.
L1Audit l1_hypothesis_audit(const ScalarTrajectory& traj,
                            const std::vector<double>& horizons);

}  // namespace latflow
