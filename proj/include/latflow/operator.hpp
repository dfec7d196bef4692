#pragma once

#include "latflow/grid.hpp"

namespace latflow {

/// Dense symmetric operator acting on Fields over a fixed grid.
struct DiscreteOperator {
  PeriodicGrid grid;
  Matrix m;

  Vector apply(const Vector& u) const { return m * u; }
  Field apply(const Field& u) const { return Field(grid, m * u.values); }

  /// ||M^T - M|| / ||M|| in the Frobenius sense.
  double asymmetry() const {
    double s = m.norm();
    if (s == 0.0) return 0.0;
    return (m.transpose() - m).norm() / s;
  }
};

}  // namespace latflow
