#pragma once

#include <functional>
#include <string>

#include "latflow/grid.hpp"
#include "latflow/operator.hpp"

namespace latflow {

/// A 1-D periodic elliptic functional with integrand A(x, z, q) and its
/// analytic partial derivatives. Fields must stay inside the graphicality
/// bound (|u| < graph_bound - graph_margin) wherever the bound is finite.
struct EllipticFunctional {
  std::string name;
  using Fn = std::function<double(double, double, double)>;
  Fn A, A_z, A_q, A_zz, A_zq, A_qq;
  double graph_bound = std::numeric_limits<double>::infinity();
  double graph_margin = 0.0;
  double ellipticity = 0.0;  // measured Legendre-Hadamard constant at z=q=0

  bool is_graphical(const Field& u) const {
    if (!u.values.allFinite()) return false;
    if (!std::isfinite(graph_bound)) return true;
    return u.values.cwiseAbs().maxCoeff() <= graph_bound - graph_margin;
  }
  void require_graphical(const Field& u) const {
    if (!is_graphical(u))
      throw std::domain_error("field violates graphicality bound for functional '" + name + "'");
  }
};

/// Nonparametric length of latitude graphs over the equator in the round
/// 2-sphere: A(x, z, q) = sqrt(q^2 + cos^2 z).
EllipticFunctional builtin_sphere_functional();

/// Dirichlet energy A = q^2/2; the gradient flow is the heat equation.
EllipticFunctional builtin_dirichlet_functional();

/// Length of latitude graphs s = u(theta) in the warped metric
/// g = ds^2 + e^{2f(s)} dtheta^2: A = sqrt(q^2 + e^{2f(z)}).
EllipticFunctional make_warped_functional(const std::string& id,
                                          std::function<double(double)> f,
                                          std::function<double(double)> fp,
                                          std::function<double(double)> fpp);

/// Checks the Legendre-Hadamard condition A_qq(x,0,0) >= c > 0 on a sample
/// of x and records the measured constant. Throws if it fails.
void check_ellipticity(EllipticFunctional& F, int samples = 64);

/// Discrete energy: midpoint quadrature of A at 4th-order staggered
/// reconstructions of (u, u') on the interface grid.
double evaluate(const EllipticFunctional& F, const Field& u);

/// Exact discrete L2 gradient of -evaluate (so gradient(u) drives the
/// descent flow du/dt = gradient(u)).
Field gradient(const EllipticFunctional& F, const Field& u);

/// Hessian of the discrete energy at u (symmetric). The linearization of
/// gradient() at u is minus this matrix.
Matrix energy_hessian(const EllipticFunctional& F, const Field& u);

/// Gradient split at the critical point 0: gradient(u) = L u + remainder(u).
struct GradientSplit {
  EllipticFunctional functional;
  DiscreteOperator linear;

  Field remainder(const Field& u) const {
    Field g = gradient(functional, u);
    g.values -= linear.m * u.values;
    return g;
  }
};

/// Requires gradient(0) = 0 to tolerance; L is the exact linearization of
/// the discrete gradient at 0.
GradientSplit gradient_split(const EllipticFunctional& F, const PeriodicGrid& g,
                             double tol = 1e-10);

}  // namespace latflow
