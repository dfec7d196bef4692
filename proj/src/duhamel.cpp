#include "latflow/duhamel.hpp"

#include <cmath>

namespace latflow {

LinearAncientSolution solve_linear_ancient(const EigenSystem& es, const Vector& a,
                                           const Forcing& h, double T_max, double dt,
                                           double tail_tol) {
  const int n = es.grid.n;
  const int nt = static_cast<int>(std::round(T_max / dt)) + 1;
  Matrix H(n, nt);
  for (int i = 0; i < nt; ++i) {
    double t = -T_max + i * dt;
    for (int p = 0; p < n; ++p) H(p, i) = h.evaluator(es.grid.node(p), t);
  }
  return solve_linear_ancient_sampled(es, a, H, h.delta, h.bound, T_max, dt, tail_tol);
}

LinearAncientSolution solve_linear_ancient_sampled(const EigenSystem& es,
                                                   const Vector& a, const Matrix& H,
                                                   double delta, double bound,
                                                   double T_max, double dt,
                                                   double tail_tol) {
  if (delta <= 0.0)
    throw std::domain_error("solve_linear_ancient: forcing decay rate delta must be > 0");
  if (a.size() != es.index)
    throw std::invalid_argument("solve_linear_ancient: unstable data size != index");
  const int n = es.grid.n;
  const int nt = static_cast<int>(H.cols());
  if (H.rows() != n || nt < 2)
    throw std::invalid_argument("solve_linear_ancient: bad forcing sample shape");

  // Mode recursions use exact exponential factors, so stiffness of the far
  // stable spectrum is harmless; accuracy only requires resolving the
  // unstable rates and the forcing decay.
  double rate = delta;
  for (int j = 0; j < es.index; ++j) rate = std::max(rate, -es.lambdas[j]);
  if (dt > 0.1 / std::max(1.0, rate))
    throw std::invalid_argument("solve_linear_ancient: dt too large for the unstable rates");

  // Certificate check / measurement of sup e^{-delta t} ||h||.
  double measured = 0.0;
  for (int i = 0; i < nt; ++i) {
    double t = -T_max + i * dt;
    measured = std::max(measured, std::exp(-delta * t) * l2_norm(es.grid, H.col(i)));
  }
  if (bound > 0.0 && measured > bound * (1.0 + 1e-9))
    throw std::domain_error("solve_linear_ancient: forcing exceeds its declared bound");
  if (bound <= 0.0) bound = measured;

  // Mode coefficients of the forcing.
  Matrix Hm = es.grid.h * (es.phis.transpose() * H);

  Matrix coeffs(n, nt);
  double tail_max = 0.0;
  for (int j = 0; j < n; ++j) {
    const double lam = es.lambdas[j];
    auto row = coeffs.row(j);
    if (j < es.index) {
      // u_j(t) = a_j e^{-lam t} - int_t^0 e^{lam (s-t)} h_j(s) ds
      const double f = std::exp(lam * dt);
      double integ = 0.0;  // int_{t_i}^0 e^{lam(s - t_i)} h_j(s) ds
      row[nt - 1] = a[j];
      for (int i = nt - 2; i >= 0; --i) {
        integ = f * integ + 0.5 * dt * (Hm(j, i) + f * Hm(j, i + 1));
        double t = -T_max + i * dt;
        row[i] = a[j] * std::exp(-lam * t) - integ;
      }
    } else {
      // u_j(t) = int_{-inf}^t e^{lam (s-t)} h_j(s) ds; the tail below -T_max
      // is seeded with the closed form for h_j(s) ~ h_j(-T) e^{delta (s+T)}.
      const double f = std::exp(-lam * dt);
      double tail = Hm(j, 0) / (lam + delta);
      tail_max = std::max(tail_max,
                          bound * std::exp(-delta * T_max) / (lam + delta));
      double integ = tail;
      row[0] = integ;
      for (int i = 1; i < nt; ++i) {
        integ = f * integ + 0.5 * dt * (f * Hm(j, i - 1) + Hm(j, i));
        row[i] = integ;
      }
    }
  }
  if (tail_max > tail_tol)
    throw std::runtime_error(
        "solve_linear_ancient: horizon too short, tail estimate " +
        std::to_string(tail_max) + " exceeds tolerance");

  LinearAncientSolution sol;
  sol.traj.grid = es.grid;
  sol.traj.t0 = -T_max;
  sol.traj.dt = dt;
  sol.traj.fields = es.phis * coeffs;
  sol.a = a;
  sol.coeffs = std::move(coeffs);
  sol.forcing = H;
  sol.delta = delta;
  sol.bound = bound;
  sol.tail_bound = tail_max;
  return sol;
}

LinearBoundReport verify_linear_bound(const EigenSystem& es,
                                      const LinearAncientSolution& sol,
                                      double delta_prime) {
  const FlowTrajectory& traj = sol.traj;
  LinearBoundReport rep;
  double integral = 0.0;
  for (int i = 0; i < traj.nt(); ++i) {
    double t = traj.time(i);
    Vector dev = traj.fields.col(i) - iota_minus(es, sol.a, t).values;
    rep.lhs_max = std::max(rep.lhs_max,
                           std::exp(-delta_prime * t) * l2_norm(es.grid, dev));
    double g = std::exp(-sol.delta * t) * l2_norm(es.grid, sol.forcing.col(i));
    double w = (i == 0 || i == traj.nt() - 1) ? 0.5 : 1.0;
    integral += w * traj.dt * g * g;
  }
  rep.rhs = std::sqrt(integral);
  rep.c = rep.rhs > 0.0 ? rep.lhs_max / rep.rhs : 0.0;
  return rep;
}

double linear_residual(const DiscreteOperator& L, const LinearAncientSolution& sol) {
  const FlowTrajectory& traj = sol.traj;
  double worst = 0.0;
  for (int i = 1; i + 1 < traj.nt(); ++i) {
    Vector dudt = (traj.fields.col(i + 1) - traj.fields.col(i - 1)) / (2.0 * traj.dt);
    Vector res = dudt - L.m * traj.fields.col(i) - sol.forcing.col(i);
    worst = std::max(worst, l2_norm(traj.grid, res));
  }
  return worst;
}

}  // namespace latflow
