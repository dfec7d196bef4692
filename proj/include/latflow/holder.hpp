#pragma once

#include "latflow/trajectory.hpp"

namespace latflow {

/// Discrete parabolic Hoelder norm C^{k,theta}_P over the trajectory's whole
/// space-time box: sup of u and its difference-quotient derivatives up to
/// order k (plus du/dt when k = 2), plus the Hoelder seminorm of the top
/// order terms with parabolic distance d(p,q)^theta + |t-s|^{theta/2}.
/// Pair suprema are evaluated on a deterministic subsample of the box.
double parabolic_holder_norm(const FlowTrajectory& traj, int k, double theta);

/// sup over unit windows [t-1, t] of e^{-delta t} * ||u||_{C^{k,theta}_P}.
double weighted_parabolic_norm(const FlowTrajectory& traj, int k, double theta,
                               double delta);

}  // namespace latflow
