#pragma once

#include <vector>

#include "latflow/grid.hpp"
#include "latflow/operator.hpp"

namespace latflow {

/// Eigensystem of -L for a symmetric DiscreteOperator L. Eigenvalues
/// ascending; eigenfunctions L2-orthonormal with respect to grid quadrature.
/// index counts lambda < -zero_tol, nullity counts |lambda| <= zero_tol.
struct EigenSystem {
  PeriodicGrid grid;
  Vector lambdas;   // eigenvalues of -L, ascending
  Matrix phis;      // column j is phi_j, h * phi_i . phi_j = delta_ij
  int index = 0;    // I
  int nullity = 0;  // K
  double zero_tol = 0.0;

  const auto phi(int j) const { return phis.col(j); }

  /// Coefficients u_j = <u, phi_j>_{L2}.
  Vector mode_coefficients(const Vector& u) const {
    return grid.h * (phis.transpose() * u);
  }

  Vector project_span(const Vector& u, int first, int count) const {
    if (count <= 0) return Vector::Zero(u.size());
    auto block = phis.middleCols(first, count);
    return block * (grid.h * (block.transpose() * u));
  }

  Vector project_unstable(const Vector& u) const { return project_span(u, 0, index); }
  Vector project_neutral(const Vector& u) const { return project_span(u, index, nullity); }
  Vector project_stable(const Vector& u) const {
    return u - project_unstable(u) - project_neutral(u);
  }
};

/// Full dense symmetric eigensolve of -L. zero_tol <= 0 selects the default
/// 1e-6 * max|lambda|.
EigenSystem eigendecompose(const DiscreteOperator& L, double zero_tol = -1.0);

Field project_unstable(const EigenSystem& es, const Field& u);
Field project_neutral(const EigenSystem& es, const Field& u);

/// iota_-(a)(theta, t) = sum_{j<=I} a_j e^{-lambda_j t} phi_j(theta), t <= 0.
Field iota_minus(const EigenSystem& es, const Vector& a, double t);

/// iota_0(a) = sum_{j=1..K} a_j phi_{I+j}.
Field iota_zero(const EigenSystem& es, const Vector& a);

}  // namespace latflow
