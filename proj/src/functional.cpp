#include "latflow/functional.hpp"

#include <array>
#include <cmath>

namespace latflow {

namespace {

// Interface m+1/2 couples nodes m-1, m, m+1, m+2. The reconstructions of
// (u, u') at the interface are 4th-order accurate; midpoint quadrature of a
// smooth periodic integrand then makes the discrete energy 4th-order too.
constexpr std::array<int, 4> kOffsets = {-1, 0, 1, 2};
constexpr std::array<double, 4> kWz = {-1.0 / 16, 9.0 / 16, 9.0 / 16, -1.0 / 16};
constexpr std::array<double, 4> kWq = {1.0 / 24, -27.0 / 24, 27.0 / 24, -1.0 / 24};

struct InterfaceState {
  double x, z, q;
};

InterfaceState interface_state(const PeriodicGrid& g, const Vector& u, int m) {
  double z = 0.0, q = 0.0;
  for (int k = 0; k < 4; ++k) {
    double v = u[(m + kOffsets[k] + g.n) % g.n];
    z += kWz[k] * v;
    q += kWq[k] * v;
  }
  return {g.midpoint(m), z, q / g.h};
}

}  // namespace

double evaluate(const EllipticFunctional& F, const Field& u) {
  F.require_graphical(u);
  const PeriodicGrid& g = u.grid;
  double total = 0.0;
  for (int m = 0; m < g.n; ++m) {
    InterfaceState s = interface_state(g, u.values, m);
    total += F.A(s.x, s.z, s.q);
  }
  return g.h * total;
}

Field gradient(const EllipticFunctional& F, const Field& u) {
  F.require_graphical(u);
  const PeriodicGrid& g = u.grid;
  const int n = g.n;
  Vector out = Vector::Zero(n);
  for (int m = 0; m < n; ++m) {
    InterfaceState s = interface_state(g, u.values, m);
    double az = F.A_z(s.x, s.z, s.q);
    double aq = F.A_q(s.x, s.z, s.q);
    for (int k = 0; k < 4; ++k) {
      int j = (m + kOffsets[k] + n) % n;
      out[j] -= az * kWz[k] + aq * kWq[k] / g.h;
    }
  }
  return Field(g, std::move(out));
}

Matrix energy_hessian(const EllipticFunctional& F, const Field& u) {
  F.require_graphical(u);
  const PeriodicGrid& g = u.grid;
  const int n = g.n;
  Matrix H = Matrix::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    InterfaceState s = interface_state(g, u.values, m);
    double azz = F.A_zz(s.x, s.z, s.q);
    double azq = F.A_zq(s.x, s.z, s.q);
    double aqq = F.A_qq(s.x, s.z, s.q);
    std::array<double, 4> wz = kWz;
    std::array<double, 4> wq;
    for (int k = 0; k < 4; ++k) wq[k] = kWq[k] / g.h;
    for (int a = 0; a < 4; ++a) {
      int ja = (m + kOffsets[a] + n) % n;
      for (int b = 0; b < 4; ++b) {
        int jb = (m + kOffsets[b] + n) % n;
        H(ja, jb) += azz * wz[a] * wz[b] + azq * (wz[a] * wq[b] + wq[a] * wz[b]) +
                     aqq * wq[a] * wq[b];
      }
    }
  }
  return H;
}

GradientSplit gradient_split(const EllipticFunctional& F, const PeriodicGrid& g,
                             double tol) {
  Field zero(g);
  double g0 = l2_norm(g, gradient(F, zero).values);
  if (g0 > tol)
    throw std::domain_error("gradient_split: 0 is not a critical point of '" + F.name +
                            "' (|gradient(0)| = " + std::to_string(g0) + ")");
  DiscreteOperator L{g, -energy_hessian(F, zero)};
  return GradientSplit{F, std::move(L)};
}

void check_ellipticity(EllipticFunctional& F, int samples) {
  double c = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    double x = 2.0 * M_PI * i / samples;
    c = std::min(c, F.A_qq(x, 0.0, 0.0));
  }
  if (!(c > 0.0))
    throw std::domain_error("functional '" + F.name + "' fails Legendre-Hadamard at z=q=0");
  F.ellipticity = c;
}

EllipticFunctional builtin_sphere_functional() {
  EllipticFunctional F;
  F.name = "sphere";
  F.graph_bound = M_PI / 2;
  F.graph_margin = 0.05;
  auto W = [](double z, double q) {
    double c = std::cos(z);
    return std::sqrt(q * q + c * c);
  };
  F.A = [W](double, double z, double q) { return W(z, q); };
  F.A_q = [W](double, double z, double q) { return q / W(z, q); };
  F.A_z = [W](double, double z, double q) {
    return -std::cos(z) * std::sin(z) / W(z, q);
  };
  F.A_qq = [W](double, double z, double q) {
    double w = W(z, q), c = std::cos(z);
    return c * c / (w * w * w);
  };
  F.A_zq = [W](double, double z, double q) {
    double w = W(z, q);
    return q * std::sin(z) * std::cos(z) / (w * w * w);
  };
  F.A_zz = [W](double, double z, double q) {
    double w = W(z, q), s = std::sin(z), c = std::cos(z);
    return -std::cos(2.0 * z) / w - s * s * c * c / (w * w * w);
  };
  check_ellipticity(F);
  return F;
}

EllipticFunctional builtin_dirichlet_functional() {
  EllipticFunctional F;
  F.name = "heat";
  F.A = [](double, double, double q) { return 0.5 * q * q; };
  F.A_q = [](double, double, double q) { return q; };
  F.A_z = [](double, double, double) { return 0.0; };
  F.A_qq = [](double, double, double) { return 1.0; };
  F.A_zq = [](double, double, double) { return 0.0; };
  F.A_zz = [](double, double, double) { return 0.0; };
  check_ellipticity(F);
  return F;
}

EllipticFunctional make_warped_functional(const std::string& id,
                                          std::function<double(double)> f,
                                          std::function<double(double)> fp,
                                          std::function<double(double)> fpp) {
  EllipticFunctional F;
  F.name = "warped:" + id;
  auto W = [f](double z, double q) {
    return std::sqrt(q * q + std::exp(2.0 * f(z)));
  };
  F.A = [W](double, double z, double q) { return W(z, q); };
  F.A_q = [W](double, double z, double q) { return q / W(z, q); };
  F.A_z = [W, f, fp](double, double z, double q) {
    return std::exp(2.0 * f(z)) * fp(z) / W(z, q);
  };
  F.A_qq = [W, f](double, double z, double q) {
    double w = W(z, q);
    return std::exp(2.0 * f(z)) / (w * w * w);
  };
  F.A_zq = [W, f, fp](double, double z, double q) {
    double w = W(z, q);
    return -q * std::exp(2.0 * f(z)) * fp(z) / (w * w * w);
  };
  F.A_zz = [W, f, fp, fpp](double, double z, double q) {
    double w = W(z, q);
    double e2f = std::exp(2.0 * f(z));
    double d = fp(z);
    return (2.0 * d * d + fpp(z)) * e2f / w - e2f * e2f * d * d / (w * w * w);
  };
  check_ellipticity(F);
  return F;
}

}  // namespace latflow
