#include "latflow/spectral.hpp"

#include <Eigen/Eigenvalues>

namespace latflow {

EigenSystem eigendecompose(const DiscreteOperator& L, double zero_tol) {
  if (L.asymmetry() > 1e-12)
    throw std::invalid_argument("eigendecompose: operator is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(-L.m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: dense symmetric eigensolve failed");

  EigenSystem es;
  es.grid = L.grid;
  es.lambdas = solver.eigenvalues();
  es.phis = solver.eigenvectors() / std::sqrt(L.grid.h);

  // Deterministic sign: the first component of largest magnitude is positive.
  for (int j = 0; j < es.phis.cols(); ++j) {
    auto col = es.phis.col(j);
    int imax = 0;
    for (int i = 1; i < col.size(); ++i)
      if (std::fabs(col[i]) > std::fabs(col[imax])) imax = i;
    if (col[imax] < 0.0) col = -col;
  }

  double lmax = es.lambdas.cwiseAbs().maxCoeff();
  es.zero_tol = zero_tol > 0.0 ? zero_tol : 1e-6 * std::max(1.0, lmax);
  es.index = 0;
  es.nullity = 0;
  for (int j = 0; j < es.lambdas.size(); ++j) {
    if (es.lambdas[j] < -es.zero_tol)
      ++es.index;
    else if (es.lambdas[j] <= es.zero_tol)
      ++es.nullity;
  }
  return es;
}

Field project_unstable(const EigenSystem& es, const Field& u) {
  return Field(es.grid, es.project_unstable(u.values));
}

Field project_neutral(const EigenSystem& es, const Field& u) {
  return Field(es.grid, es.project_neutral(u.values));
}

Field iota_minus(const EigenSystem& es, const Vector& a, double t) {
  if (t > 0.0) throw std::domain_error("iota_minus: requires t <= 0");
  if (a.size() != es.index)
    throw std::invalid_argument("iota_minus: parameter size must equal the index");
  Vector out = Vector::Zero(es.grid.n);
  for (int j = 0; j < es.index; ++j)
    out += a[j] * std::exp(-es.lambdas[j] * t) * es.phis.col(j);
  return Field(es.grid, std::move(out));
}

Field iota_zero(const EigenSystem& es, const Vector& a) {
  if (a.size() != es.nullity)
    throw std::invalid_argument("iota_zero: parameter size must equal the nullity");
  Vector out = Vector::Zero(es.grid.n);
  for (int j = 0; j < es.nullity; ++j) out += a[j] * es.phis.col(es.index + j);
  return Field(es.grid, std::move(out));
}

}  // namespace latflow
