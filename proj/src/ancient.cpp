#include "latflow/ancient.hpp"

#include <cmath>

#include "latflow/holder.hpp"

namespace latflow {

FlowTrajectory iota_trajectory(const EigenSystem& es, const Vector& a, double T_max,
                               double dt) {
  FlowTrajectory traj;
  traj.grid = es.grid;
  traj.t0 = -T_max;
  traj.dt = dt;
  const int nt = static_cast<int>(std::round(T_max / dt)) + 1;
  traj.fields.resize(es.grid.n, nt);
  for (int i = 0; i < nt; ++i)
    traj.fields.col(i) = iota_minus(es, a, traj.time(i)).values;
  return traj;
}

namespace {

Matrix remainder_samples(const GradientSplit& split, const FlowTrajectory& traj) {
  Matrix R = -(split.linear.m * traj.fields);
  for (int i = 0; i < traj.nt(); ++i) {
    R.col(i) += gradient(split.functional, traj.field(i)).values;
  }
  return R;
}

}  // namespace

AncientSolution construct_ancient(const GradientSplit& split, const EigenSystem& es,
                                  const Vector& a, const AncientOptions& opts) {
  if (a.size() != es.index)
    throw std::invalid_argument("construct_ancient: parameter size must equal the index");
  if (a.norm() > opts.eta)
    throw std::domain_error("construct_ancient: |a| exceeds the convergence radius eta");
  double lambda_I = es.index > 0 ? es.lambdas[es.index - 1] : -1.0;
  if (!(opts.delta0 > 0.0 && opts.delta0 < -lambda_I))
    throw std::invalid_argument("construct_ancient: delta0 must lie in (0, -lambda_I)");
  const double delta_force = opts.delta0 - lambda_I;

  FlowTrajectory iota = iota_trajectory(es, a, opts.T_max, opts.dt);

  AncientSolution out;
  out.a = a;
  out.delta0 = opts.delta0;
  out.traj = iota;

  if (a.norm() == 0.0) {
    out.iterations = 1;
    out.iteration_distances.push_back(0.0);
    return out;
  }

  FlowTrajectory current = iota;
  int rising = 0;
  for (int k = 0; k < opts.max_iterations; ++k) {
    double amp = current.fields.cwiseAbs().maxCoeff();
    if (std::isfinite(split.functional.graph_bound) &&
        amp > split.functional.graph_bound - split.functional.graph_margin)
      throw std::domain_error("construct_ancient: iterate lost graphicality");

    Matrix R = remainder_samples(split, current);
    LinearAncientSolution lin = solve_linear_ancient_sampled(
        es, a, R, delta_force, 0.0, opts.T_max, opts.dt, opts.tail_tol);

    double dist = weighted_parabolic_norm(difference(lin.traj, current), 2,
                                          opts.theta, opts.delta0);
    out.iteration_distances.push_back(dist);
    ++out.iterations;
    current = std::move(lin.traj);

    if (dist < opts.tol) break;
    size_t m = out.iteration_distances.size();
    if (m >= 2 && out.iteration_distances[m - 1] >= out.iteration_distances[m - 2]) {
      if (++rising >= 3)
        throw std::runtime_error(
            "construct_ancient: contraction failed for 3 consecutive iterates; "
            "try a smaller |a|");
    } else {
      rising = 0;
    }
  }

  out.traj = std::move(current);
  out.weighted_distance =
      weighted_parabolic_norm(difference(out.traj, iota), 2, opts.theta, opts.delta0);
  return out;
}

TangencyReport tangency_check(const GradientSplit& split, const EigenSystem& es,
                              const Vector& a_direction, const std::vector<double>& scales,
                              const AncientOptions& opts) {
  if (scales.size() < 2)
    throw std::invalid_argument("tangency_check: need at least two scales");
  FlowTrajectory iota = iota_trajectory(es, a_direction, opts.T_max, opts.dt);

  TangencyReport rep;
  rep.scales = scales;
  for (double s : scales) {
    if (!(s > 0.0)) throw std::invalid_argument("tangency_check: scales must be positive");
    AncientSolution plus = construct_ancient(split, es, s * a_direction, opts);
    AncientSolution minus = construct_ancient(split, es, -s * a_direction, opts);
    Matrix dev = (plus.traj.fields - minus.traj.fields) / (2.0 * s) - iota.fields;
    double worst = 0.0;
    for (int i = 0; i < iota.nt(); ++i)
      worst = std::max(worst, l2_norm(es.grid, dev.col(i)));
    rep.deviations.push_back(worst);
  }

  // least-squares slope of log(dev) against log(s)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(scales.size());
  for (int i = 0; i < m; ++i) {
    double x = std::log(scales[i]);
    double y = std::log(std::max(rep.deviations[i], 1e-300));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  rep.fitted_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.first_ratio = rep.deviations[1] > 0.0 ? rep.deviations[0] / rep.deviations[1]
                                            : std::numeric_limits<double>::infinity();
  return rep;
}

EnvelopeReport verify_quadratic_envelope(const std::vector<AncientSolution>& sols) {
  if (sols.size() < 3)
    throw std::invalid_argument("verify_quadratic_envelope: need at least 3 solutions");
  EnvelopeReport rep;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& s : sols) {
    double an = s.a.norm();
    if (an == 0.0) continue;
    double ratio = s.weighted_distance / (an * an);
    rep.a_norms.push_back(an);
    rep.distances.push_back(s.weighted_distance);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  rep.mu = hi;
  rep.ratio_spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace latflow
