#include "latflow/flow.hpp"

#include <Eigen/LU>
#include <cmath>

namespace latflow {

FlowTrajectory evolve(const GradientSplit& split, const Field& u0, double t0,
                      double t1, double dt) {
  if (!(t1 > t0) || dt <= 0.0)
    throw std::invalid_argument("evolve: need t1 > t0 and dt > 0");
  split.functional.require_graphical(u0);
  const PeriodicGrid& g = u0.grid;
  const int n = g.n;
  const int steps = static_cast<int>(std::round((t1 - t0) / dt));

  Matrix A1 = Matrix::Identity(n, n) - 0.5 * dt * split.linear.m;
  Matrix A2 = Matrix::Identity(n, n) + 0.5 * dt * split.linear.m;
  Eigen::PartialPivLU<Matrix> lu(A1);

  FlowTrajectory traj;
  traj.grid = g;
  traj.t0 = t0;
  traj.dt = dt;
  traj.fields.resize(n, steps + 1);
  traj.fields.col(0) = u0.values;

  auto admissible = [&](const Vector& v) {
    if (!v.allFinite()) return false;
    if (!std::isfinite(split.functional.graph_bound)) return true;
    return v.cwiseAbs().maxCoeff() <=
           split.functional.graph_bound - split.functional.graph_margin;
  };

  Vector r_prev = split.remainder(u0).values;
  int done = 0;
  for (int m = 0; m < steps; ++m) {
    Vector u = traj.fields.col(m);
    Vector next;
    if (m == 0) {
      Vector pred = lu.solve(A2 * u + dt * r_prev);
      if (!admissible(pred)) break;
      Vector r_pred = split.remainder(Field(g, pred)).values;
      next = lu.solve(A2 * u + 0.5 * dt * (r_prev + r_pred));
    } else {
      Vector u_prev = traj.fields.col(m - 1);
      Vector r_here = split.remainder(Field(g, u)).values;
      next = lu.solve(A2 * u + dt * (1.5 * r_here - 0.5 * r_prev));
      r_prev = std::move(r_here);
    }
    if (!admissible(next)) {
      traj.status = next.allFinite() ? FlowStatus::graphicality_lost
                                     : FlowStatus::blown_up;
      break;
    }
    traj.fields.col(m + 1) = next;
    done = m + 1;
  }
  if (done < steps) {
    traj.fields.conservativeResize(n, done + 1);
    if (traj.status == FlowStatus::ok) traj.status = FlowStatus::graphicality_lost;
  }
  return traj;
}

LatitudeTrajectory evolve_parametric_latitude(double phi0, double t0, double t1,
                                              double dt) {
  if (std::fabs(phi0) >= M_PI / 2)
    throw std::domain_error("evolve_parametric_latitude: |phi0| must be < pi/2");
  const double phi_stop = 1.2;  // past this, finish with the exact cot-integral tail
  LatitudeTrajectory out;
  double t = t0, phi = phi0;
  out.times.push_back(t);
  out.phis.push_back(phi);
  auto rhs = [](double p) { return std::tan(p); };
  while (t < t1 - 0.5 * dt) {
    if (std::fabs(phi) >= phi_stop) {
      out.extinct = true;
      out.extinction_time = t - std::log(std::sin(std::fabs(phi)));
      return out;
    }
    double k1 = rhs(phi);
    double k2 = rhs(phi + 0.5 * dt * k1);
    double k3 = rhs(phi + 0.5 * dt * k2);
    double k4 = rhs(phi + dt * k3);
    phi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += dt;
    out.times.push_back(t);
    out.phis.push_back(phi);
  }
  if (std::fabs(phi) >= phi_stop) {
    out.extinct = true;
    out.extinction_time = t - std::log(std::sin(std::fabs(phi)));
  }
  return out;
}

ModeEnergySeries mode_energies(const EigenSystem& es, const FlowTrajectory& traj) {
  if (traj.status != FlowStatus::ok)
    throw std::invalid_argument("mode_energies: trajectory status is not ok");
  ModeEnergySeries s;
  const int I = es.index, K = es.nullity;
  s.lambda_I = I > 0 ? es.lambdas[I - 1] : 0.0;
  s.lambda_next = (I + K) < es.lambdas.size() ? es.lambdas[I + K] : 0.0;
  Matrix C = es.grid.h * (es.phis.transpose() * traj.fields);
  for (int i = 0; i < traj.nt(); ++i) {
    s.times.push_back(traj.time(i));
    s.u_minus.push_back(C.col(i).head(I).norm());
    s.u_zero.push_back(C.col(i).segment(I, K).norm());
    s.u_plus.push_back(C.col(i).tail(C.rows() - I - K).norm());
    s.sigma.push_back(c2_norm(es.grid, traj.fields.col(i)));
    s.l2.push_back(l2_norm(es.grid, traj.fields.col(i)));
  }
  return s;
}

DecayFit fit_decay_rate(const ModeEnergySeries& series, double t_a, double t_b) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (size_t i = 0; i < series.times.size(); ++i) {
    double t = series.times[i];
    if (t < t_a || t > t_b) continue;
    if (!(series.sigma[i] > 0.0))
      throw std::invalid_argument("fit_decay_rate: nonpositive sigma in window");
    double y = std::log(series.sigma[i]);
    sx += t; sy += y; sxx += t * t; sxy += t * y;
    ++m;
  }
  if (m < 3) throw std::invalid_argument("fit_decay_rate: window too small");
  DecayFit fit;
  fit.rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double intercept = (sy - fit.rate * sx) / m;
  double rss = 0.0, spread = 0.0, mean = sy / m;
  for (size_t i = 0; i < series.times.size(); ++i) {
    double t = series.times[i];
    if (t < t_a || t > t_b) continue;
    double y = std::log(series.sigma[i]);
    rss += std::pow(y - (intercept + fit.rate * t), 2);
    spread += std::pow(y - mean, 2);
  }
  fit.residual = spread > 0.0 ? std::sqrt(rss / spread) : 0.0;
  return fit;
}

CaccioppoliReport check_caccioppoli(const FlowTrajectory& traj, double c1_smallness) {
  CaccioppoliReport rep;
  for (int i = 0; i < traj.nt(); ++i) {
    Vector u = traj.fields.col(i);
    if (c1_norm(traj.grid, u) > c1_smallness)
      throw std::domain_error("check_caccioppoli: trajectory leaves the smallness regime");
    double l2 = l2_norm(traj.grid, u);
    if (l2 < 1e-14) continue;
    double grad = l2_norm(traj.grid, diff1(traj.grid, u));
    double w12 = std::sqrt(l2 * l2 + grad * grad);
    rep.applicable = true;
    rep.max_ratio = std::max(rep.max_ratio, w12 / l2);
  }
  return rep;
}

ModeInequalityReport verify_mode_inequalities(const ModeEnergySeries& series,
                                              double eps_floor) {
  ModeInequalityReport rep;
  const size_t m = series.times.size();
  if (m < 3) throw std::invalid_argument("verify_mode_inequalities: series too short");
  double gate = 0.0;
  for (size_t i = 0; i < m; ++i) gate = std::max(gate, series.sigma[i] * series.l2[i]);
  gate *= eps_floor;
  const double dt = series.times[1] - series.times[0];
  for (size_t i = 1; i + 1 < m; ++i) {
    double denom = series.sigma[i] * series.l2[i];
    if (denom <= gate) continue;
    double dum = (series.u_minus[i + 1] - series.u_minus[i - 1]) / (2.0 * dt);
    double duz = (series.u_zero[i + 1] - series.u_zero[i - 1]) / (2.0 * dt);
    double dup = (series.u_plus[i + 1] - series.u_plus[i - 1]) / (2.0 * dt);
    rep.c_unstable = std::max(
        rep.c_unstable, -(dum + series.lambda_I * series.u_minus[i]) / denom);
    rep.c_neutral = std::max(rep.c_neutral, std::fabs(duz) / denom);
    rep.c_stable = std::max(
        rep.c_stable, (dup + series.lambda_next * series.u_plus[i]) / denom);
  }
  rep.c_unstable = std::max(rep.c_unstable, 0.0);
  rep.c_stable = std::max(rep.c_stable, 0.0);
  return rep;
}

EnergyIdentityReport energy_identity(const EllipticFunctional& F,
                                     const FlowTrajectory& traj) {
  EnergyIdentityReport rep;
  const int nt = traj.nt();
  if (nt < 4) throw std::invalid_argument("energy_identity: trajectory too short");

  std::vector<double> energy(nt);
  for (int i = 0; i < nt; ++i) energy[i] = evaluate(F, traj.field(i));
  for (int i = 1; i < nt; ++i)
    rep.max_increase = std::max(rep.max_increase, energy[i] - energy[i - 1]);

  // centered du/dt is 2nd order only at interior samples; compare the energy
  // drop and the dissipation integral over [t_1, t_{nt-2}]
  rep.delta_energy = energy[nt - 2] - energy[1];
  double integral = 0.0;
  for (int i = 1; i + 1 < nt; ++i) {
    Vector dudt = (traj.fields.col(i + 1) - traj.fields.col(i - 1)) / (2.0 * traj.dt);
    double v = l2_norm(traj.grid, dudt);
    double w = (i == 1 || i == nt - 2) ? 0.5 : 1.0;
    integral += w * traj.dt * v * v;
  }
  rep.dissipation = integral;
  double denom = std::fabs(rep.delta_energy);
  rep.relative_residual =
      denom > 0.0 ? std::fabs(rep.delta_energy + rep.dissipation) / denom : 0.0;
  return rep;
}

double flow_residual(const EllipticFunctional& F, const FlowTrajectory& traj) {
  double worst = 0.0;
  for (int i = 1; i + 1 < traj.nt(); ++i) {
    Vector dudt = (traj.fields.col(i + 1) - traj.fields.col(i - 1)) / (2.0 * traj.dt);
    Vector res = dudt - gradient(F, traj.field(i)).values;
    worst = std::max(worst, l2_norm(traj.grid, res));
  }
  return worst;
}

double l1_time_norm(const FlowTrajectory& traj) {
  double total = 0.0;
  for (int i = 0; i < traj.nt(); ++i) {
    double w = (i == 0 || i == traj.nt() - 1) ? 0.5 : 1.0;
    total += w * traj.dt * traj.fields.col(i).cwiseAbs().maxCoeff();
  }
  return total;
}

}  // namespace latflow
