#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace latflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Uniform periodic grid on a circle of given circumference.
/// Grid nodes are theta_i = i*h, i = 0..n-1, indices wrap mod n.
struct PeriodicGrid {
  int n = 0;
  double length = 2.0 * M_PI;
  double h = 0.0;

  PeriodicGrid() = default;
  PeriodicGrid(int n_, double length_ = 2.0 * M_PI) : n(n_), length(length_) {
    if (n < 8) throw std::invalid_argument("PeriodicGrid: n must be >= 8");
    if (length <= 0.0) throw std::invalid_argument("PeriodicGrid: length must be positive");
    h = length / n;
  }

  double node(int i) const {
    int j = ((i % n) + n) % n;
    return j * h;
  }
  double midpoint(int i) const { return node(i) + 0.5 * h; }

  bool operator==(const PeriodicGrid& o) const {
    return n == o.n && length == o.length;
  }
};

/// Scalar field sampled at the grid nodes.
struct Field {
  PeriodicGrid grid;
  Vector values;

  Field() = default;
  Field(const PeriodicGrid& g) : grid(g), values(Vector::Zero(g.n)) {}
  Field(const PeriodicGrid& g, Vector v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n)
      throw std::invalid_argument("Field: value count does not match grid");
  }

  double operator[](int i) const {
    int j = ((i % grid.n) + grid.n) % grid.n;
    return values[j];
  }
};

/// L2 inner product with grid quadrature weight h.
inline double l2_inner(const PeriodicGrid& g, const Vector& u, const Vector& v) {
  return g.h * u.dot(v);
}
inline double l2_norm(const PeriodicGrid& g, const Vector& u) {
  return std::sqrt(g.h) * u.norm();
}

/// Centered first difference (2nd order), periodic wrap.
Vector diff1(const PeriodicGrid& g, const Vector& u);
/// Centered second difference (2nd order), periodic wrap.
Vector diff2(const PeriodicGrid& g, const Vector& u);

/// sup |u| + sup |u'| + sup |u''| with centered differences.
double c2_norm(const PeriodicGrid& g, const Vector& u);
/// sup |u| + sup |u'|.
double c1_norm(const PeriodicGrid& g, const Vector& u);

/// Shortest periodic distance between two angles.
inline double periodic_dist(const PeriodicGrid& g, double a, double b) {
  double d = std::fmod(std::fabs(a - b), g.length);
  return std::min(d, g.length - d);
}

}  // namespace latflow
