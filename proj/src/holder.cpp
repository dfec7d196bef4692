#include "latflow/holder.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace latflow {

Matrix FlowTrajectory::time_derivative() const {
  const int m = nt();
  Matrix d(fields.rows(), m);
  if (m < 2) {
    d.setZero();
    return d;
  }
  d.col(0) = (fields.col(1) - fields.col(0)) / dt;
  d.col(m - 1) = (fields.col(m - 1) - fields.col(m - 2)) / dt;
  for (int i = 1; i < m - 1; ++i)
    d.col(i) = (fields.col(i + 1) - fields.col(i - 1)) / (2.0 * dt);
  return d;
}

FlowTrajectory difference(const FlowTrajectory& a, const FlowTrajectory& b) {
  if (!(a.grid == b.grid) || a.nt() != b.nt() || a.t0 != b.t0 || a.dt != b.dt)
    throw std::invalid_argument("trajectory difference: incompatible sampling");
  FlowTrajectory d = a;
  d.fields -= b.fields;
  return d;
}

namespace {

Matrix spatial_diff1(const PeriodicGrid& g, const Matrix& u) {
  const int n = g.n;
  Matrix d(n, u.cols());
  for (int i = 0; i < n; ++i)
    d.row(i) = (u.row((i + 1) % n) - u.row((i - 1 + n) % n)) / (2.0 * g.h);
  return d;
}

Matrix spatial_diff2(const PeriodicGrid& g, const Matrix& u) {
  const int n = g.n;
  Matrix d(n, u.cols());
  for (int i = 0; i < n; ++i)
    d.row(i) = (u.row((i + 1) % n) - 2.0 * u.row(i) + u.row((i - 1 + n) % n)) /
               (g.h * g.h);
  return d;
}

std::vector<int> subsample(int first, int last, int target) {
  std::vector<int> idx;
  int count = last - first + 1;
  int stride = std::max(1, count / target);
  for (int i = first; i <= last; i += stride) idx.push_back(i);
  if (idx.back() != last) idx.push_back(last);
  return idx;
}

double pair_seminorm(const FlowTrajectory& traj, const Matrix& f, double theta,
                     int i0, int i1) {
  const PeriodicGrid& g = traj.grid;
  std::vector<int> tidx = subsample(i0, i1, 12);
  std::vector<int> sidx = subsample(0, g.n - 1, 48);
  double best = 0.0;
  for (size_t a = 0; a < tidx.size(); ++a) {
    for (size_t p = 0; p < sidx.size(); ++p) {
      double fa = f(sidx[p], tidx[a]);
      double ta = traj.time(tidx[a]);
      double xa = g.node(sidx[p]);
      for (size_t b = a; b < tidx.size(); ++b) {
        double tb = traj.time(tidx[b]);
        for (size_t q = (b == a ? p + 1 : 0); q < sidx.size(); ++q) {
          double dsp = periodic_dist(g, xa, g.node(sidx[q]));
          double dist = std::pow(dsp, theta) + std::pow(std::fabs(tb - ta), theta / 2.0);
          if (dist <= 0.0) continue;
          best = std::max(best, std::fabs(fa - f(sidx[q], tidx[b])) / dist);
        }
      }
    }
  }
  return best;
}

struct DerivedFields {
  Matrix d1, d2, dt;
};

double window_norm(const FlowTrajectory& traj, const DerivedFields& der, int k,
                   double theta, int i0, int i1) {
  auto block_sup = [&](const Matrix& m) {
    return m.middleCols(i0, i1 - i0 + 1).cwiseAbs().maxCoeff();
  };
  double norm = block_sup(traj.fields);
  if (k >= 1) norm += block_sup(der.d1);
  if (k >= 2) norm += block_sup(der.d2) + block_sup(der.dt);

  switch (k) {
    case 0:
      norm += pair_seminorm(traj, traj.fields, theta, i0, i1);
      break;
    case 1:
      norm += pair_seminorm(traj, der.d1, theta, i0, i1);
      break;
    case 2:
      norm += pair_seminorm(traj, der.d2, theta, i0, i1) +
              pair_seminorm(traj, der.dt, theta, i0, i1);
      break;
  }
  return norm;
}

void validate(const FlowTrajectory& traj, int k, double theta) {
  if (k < 0 || k > 2) throw std::invalid_argument("holder norm: k must be 0, 1 or 2");
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("holder norm: theta must lie in (0,1)");
  if (traj.nt() < 2 || traj.dt <= 0.0)
    throw std::invalid_argument("holder norm: trajectory has no time extent");
  double span = traj.t_end() - traj.t0;
  double per_unit = (traj.nt() - 1) / std::max(span, 1.0);
  if (per_unit < 4.0)
    throw std::runtime_error("holder norm: sampling too sparse (< 4 samples per unit time)");
}

DerivedFields derive(const FlowTrajectory& traj) {
  return DerivedFields{spatial_diff1(traj.grid, traj.fields),
                       spatial_diff2(traj.grid, traj.fields),
                       traj.time_derivative()};
}

}  // namespace

double parabolic_holder_norm(const FlowTrajectory& traj, int k, double theta) {
  validate(traj, k, theta);
  DerivedFields der = derive(traj);
  return window_norm(traj, der, k, theta, 0, traj.nt() - 1);
}

double weighted_parabolic_norm(const FlowTrajectory& traj, int k, double theta,
                               double delta) {
  validate(traj, k, theta);
  DerivedFields der = derive(traj);
  const double span = traj.t_end() - traj.t0;
  if (span <= 1.0)
    return std::exp(-delta * traj.t_end()) *
           window_norm(traj, der, k, theta, 0, traj.nt() - 1);

  const int per_window = static_cast<int>(std::round(1.0 / traj.dt));
  const int stride = std::max(1, per_window / 2);
  double best = 0.0;
  for (int i1 = traj.nt() - 1; i1 - per_window >= 0; i1 -= stride) {
    int i0 = i1 - per_window;
    double w = std::exp(-delta * traj.time(i1));
    best = std::max(best, w * window_norm(traj, der, k, theta, i0, i1));
    if (i1 - per_window < stride) {
      // last full window anchored at the left end
      double wl = std::exp(-delta * traj.time(per_window));
      best = std::max(best, wl * window_norm(traj, der, k, theta, 0, per_window));
      break;
    }
  }
  return best;
}

}  // namespace latflow
