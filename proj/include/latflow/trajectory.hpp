#pragma once

#include "latflow/grid.hpp"

namespace latflow {

enum class FlowStatus { ok, graphicality_lost, blown_up };

inline const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::ok: return "ok";
    case FlowStatus::graphicality_lost: return "graphicality_lost";
    case FlowStatus::blown_up: return "blown_up";
  }
  return "?";
}

/// Time-sampled grid fields u(., t_i) on a uniform time grid t_i = t0 + i dt.
struct FlowTrajectory {
  PeriodicGrid grid;
  double t0 = 0.0;
  double dt = 0.0;
  Matrix fields;  // n x nt, column i is u(., t_i)
  FlowStatus status = FlowStatus::ok;

  int nt() const { return static_cast<int>(fields.cols()); }
  double time(int i) const { return t0 + i * dt; }
  double t_end() const { return time(nt() - 1); }
  Field field(int i) const { return Field(grid, fields.col(i)); }

  /// Centered time derivative at interior samples, one-sided at the ends.
  Matrix time_derivative() const;
};

FlowTrajectory difference(const FlowTrajectory& a, const FlowTrajectory& b);

}  // namespace latflow
