#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace latflow {

/// Differential-inequality system generator: nonnegative (x, y, z) driven by
///   x' =  eps * alpha(s) (x + y + z)
///   y' = -y + eps * beta(s) (x + z)
///   z' =  z - eps * gamma(s) (x + y)
/// with |alpha|, |beta|, |gamma| <= 1, so the inequality system holds by
/// construction. Coefficients are clamped near the boundary x,y,z = 0 to
/// preserve nonnegativity.
struct MZSystem {
  double eps = 0.0;
  std::function<double(double)> alpha, beta, gamma;
};

struct MZTrajectory {
  std::vector<double> times;  // on [-S, 0]
  std::vector<double> x, y, z;
  double eps = 0.0;
  bool clamped = false;  // positivity clamp engaged at least once
};

MZTrajectory integrate_mz(const MZSystem& sys, double x0, double y0, double z0,
                          double S, double ds);

enum class MZCase { A, B };

struct TrichotomyReport {
  bool slaved_neutral = false;   // y <= 2 eps (x+z) on the whole window
  double neutral_margin = 0.0;   // max of y - 2 eps (x+z)
  MZCase which = MZCase::B;
  double s_star = 0.0;           // last time with z < 8 eps x (case A)
  bool initial_segment = false;  // case A: z <= 8 eps x on all of [-S, s_star]
  double case_b_constant = 0.0;  // max x/z post-transient (case B)
  bool case_b_bound = false;     // case B: x <= 8 eps (2 + 8 eps) z post-transient
  bool pass = false;             // neutral bound + the classified case's bound
};

/// Verifies the trichotomy. The two cases split exactly: A iff z < 8 eps x
/// somewhere (then z <= 8 eps x must hold on the whole initial segment up to
/// the last such time), B iff 8 eps x <= z throughout (then
/// x <= 8 eps (2 + 8 eps) z must hold once the seed transient has decayed).
TrichotomyReport verify_trichotomy(const MZTrajectory& traj, double transient = 5.0);

struct MZTrialRecord {
  std::uint64_t seed = 0;
  MZCase which = MZCase::B;
  double case_b_constant = 0.0;
  double neutral_margin = 0.0;
  bool pass = false;
};

struct MonteCarloReport {
  int trials = 0;
  int passes = 0;
  int case_a = 0;
  int case_b = 0;
  double max_case_b_constant = 0.0;
  std::vector<MZTrialRecord> records;
};

/// Random admissible systems: smooth random Fourier coefficients clipped to
/// [-1, 1], random nonnegative seeds with y(-S) = 0. Deterministic per seed.
MonteCarloReport mz_monte_carlo(double eps, double S, double ds, int trials,
                                std::uint64_t seed);

}  // namespace latflow
