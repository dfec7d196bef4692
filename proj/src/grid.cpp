#include "latflow/grid.hpp"

namespace latflow {

Vector diff1(const PeriodicGrid& g, const Vector& u) {
  const int n = g.n;
  Vector d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = (u[(i + 1) % n] - u[(i - 1 + n) % n]) / (2.0 * g.h);
  }
  return d;
}

Vector diff2(const PeriodicGrid& g, const Vector& u) {
  const int n = g.n;
  Vector d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = (u[(i + 1) % n] - 2.0 * u[i] + u[(i - 1 + n) % n]) / (g.h * g.h);
  }
  return d;
}

double c2_norm(const PeriodicGrid& g, const Vector& u) {
  return u.cwiseAbs().maxCoeff() + diff1(g, u).cwiseAbs().maxCoeff() +
         diff2(g, u).cwiseAbs().maxCoeff();
}

double c1_norm(const PeriodicGrid& g, const Vector& u) {
  return u.cwiseAbs().maxCoeff() + diff1(g, u).cwiseAbs().maxCoeff();
}

}  // namespace latflow
