#include "latflow/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "latflow/ancient.hpp"
#include "latflow/flow.hpp"
#include "latflow/functional.hpp"
#include "latflow/mz.hpp"
#include "latflow/reduction.hpp"
#include "latflow/slow.hpp"
#include "latflow/spectral.hpp"

namespace latflow {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

struct Setup {
  EllipticFunctional sphere;
  GradientSplit split256;
  EigenSystem es256;
  std::vector<AncientSolution> sols;  // a = 0.05, 0.1, 0.2 at n = 256
};

CriterionResult spectrum_criterion() {
  CriterionResult r{1, "jacobi spectrum, index and nullity (n = 512)", false, "", 0};
  const auto start = Clock::now();
  auto F = builtin_sphere_functional();
  const PeriodicGrid g(512);
  const auto split = gradient_split(F, g);
  const auto es = eigendecompose(split.linear);
  const double expected[] = {-1, 0, 0, 3, 3, 8, 8, 15, 15};
  double err = 0.0;
  for (int j = 0; j < 9; ++j) err = std::max(err, std::abs(es.lambdas[j] - expected[j]));
  r.seconds = elapsed(start);
  r.pass = err <= 1e-3 && es.index == 1 && es.nullity == 2 && r.seconds < 5.0;
  r.detail = "max eigenvalue error " + fmt(err) + ", I = " + std::to_string(es.index) +
             ", K = " + std::to_string(es.nullity) + ", " + fmt(r.seconds) + " s";
  return r;
}

CriterionResult closed_form_criterion(Setup& setup) {
  CriterionResult r{2, "ancient constructor vs closed form (n = 256, dt = 1e-3)",
                    false, "", 0};
  const auto start = Clock::now();
  setup.sphere = builtin_sphere_functional();
  const PeriodicGrid g(256);
  setup.split256 = gradient_split(setup.sphere, g);
  setup.es256 = eigendecompose(setup.split256.linear);

  const double amps[] = {0.05, 0.1, 0.2};
  double worst = 0.0, worst_time = 0.0;
  bool ok = true;
  for (double amp : amps) {
    const auto t_a = Clock::now();
    Vector a(1);
    a << amp;
    setup.sols.push_back(construct_ancient(setup.split256, setup.es256, a));
    const auto& traj = setup.sols.back().traj;
    const double k = std::tan(amp / (2.0 * std::sqrt(2.0 * M_PI)));
    double err = 0.0;
    for (int i = 0; i < traj.nt(); ++i) {
      const double oracle = 2.0 * std::atan(k * std::exp(traj.time(i)));
      err = std::max(err, (traj.fields.col(i).array() - oracle).abs().maxCoeff());
    }
    const double dt_a = elapsed(t_a);
    worst = std::max(worst, err);
    worst_time = std::max(worst_time, dt_a);
    ok = ok && err <= 1e-4 && dt_a < 60.0;
  }
  r.seconds = elapsed(start);
  r.pass = ok;
  r.detail = "sup error " + fmt(worst) + ", slowest run " + fmt(worst_time) + " s";
  return r;
}

CriterionResult tangency_criterion() {
  CriterionResult r{3, "tangency to the unstable mode", false, "", 0};
  const auto start = Clock::now();
  auto F = builtin_sphere_functional();
  const PeriodicGrid g(128);
  const auto split = gradient_split(F, g);
  const auto es = eigendecompose(split.linear);
  Vector dir(1);
  dir << 1.0;
  const auto rep = tangency_check(split, es, dir, {0.2, 0.1, 0.05});
  r.seconds = elapsed(start);
  r.pass = rep.fitted_order >= 1.9;
  r.detail = "fitted order " + fmt(rep.fitted_order) + ", first ratio " +
             fmt(rep.first_ratio);
  return r;
}

CriterionResult envelope_criterion(const Setup& setup) {
  CriterionResult r{4, "quadratic envelope of the weighted distance", false, "", 0};
  const auto start = Clock::now();
  const auto rep = verify_quadratic_envelope(setup.sols);
  bool finite = std::isfinite(rep.mu);
  for (double d : rep.distances) finite = finite && std::isfinite(d);
  r.seconds = elapsed(start);
  r.pass = finite && rep.ratio_spread < 2.0;
  r.detail = "mu " + fmt(rep.mu) + ", distance/|a|^2 spread factor " +
             fmt(rep.ratio_spread);
  return r;
}

CriterionResult decay_criterion(const Setup& setup) {
  CriterionResult r{5, "dominant-mode decay rate and mode-energy constant", false,
                    "", 0};
  const auto start = Clock::now();
  const auto& sol = setup.sols[1];  // a = 0.1
  const auto series = mode_energies(setup.es256, sol.traj);
  const auto fit = fit_decay_rate(series, -8.0, -2.0);

  auto claim_constant = [](const ModeEnergySeries& s) {
    double c = 0.0;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
      if (s.times[i] < -8.0 || s.times[i] > -2.0) continue;
      const double denom = s.sigma[i] * s.u_minus[i];
      if (denom > 1e-300) c = std::max(c, (s.u_zero[i] + s.u_plus[i]) / denom);
    }
    return c;
  };
  const double c_full = claim_constant(series);

  AncientOptions half;
  half.dt = 5e-4;
  const auto sol_half = construct_ancient(setup.split256, setup.es256, sol.a, half);
  const double c_half = claim_constant(mode_energies(setup.es256, sol_half.traj));

  // Rotationally symmetric solutions put zero energy in the non-dominant
  // modes; below this floor the constant is roundoff and counts as stable.
  const bool degenerate = c_full <= 1e-6 && c_half <= 1e-6;
  const bool stable =
      degenerate || std::abs(c_full - c_half) <= 0.2 * std::max(c_full, c_half);
  r.seconds = elapsed(start);
  r.pass = std::abs(fit.rate - 1.0) <= 0.02 && std::isfinite(c_full) && stable;
  r.detail = "rate " + fmt(fit.rate) + ", mode-energy constant " + fmt(c_full) +
             " (dt/2: " + fmt(c_half) + (degenerate ? ", roundoff floor)" : ")");
  return r;
}

CriterionResult energy_identity_criterion() {
  CriterionResult r{6, "energy monotonicity, dissipation identity, Caccioppoli",
                    false, "", 0};
  const auto start = Clock::now();
  auto F = builtin_sphere_functional();

  auto initial = [](const PeriodicGrid& g) {
    Vector u0(g.n);
    for (int i = 0; i < g.n; ++i) {
      const double th = g.node(i);
      u0[i] = 0.02 + 0.03 * std::cos(th) + 0.02 * std::cos(2.0 * th) +
              0.01 * std::sin(3.0 * th);
    }
    return u0;
  };

  bool ok = true;
  double worst_resid = 0.0, worst_increase = 0.0;
  double ratios[2] = {0.0, 0.0};
  const int sizes[2] = {128, 256};
  for (int k = 0; k < 2; ++k) {
    const PeriodicGrid g(sizes[k]);
    const auto split = gradient_split(F, g);
    const auto traj = evolve(split, Field(g, initial(g)), 0.0, 3.0, 1e-3);
    ok = ok && traj.status == FlowStatus::ok;
    const auto id = energy_identity(F, traj);
    worst_resid = std::max(worst_resid, id.relative_residual);
    worst_increase = std::max(worst_increase, id.max_increase);
    ok = ok && id.relative_residual <= 1e-4 && id.max_increase <= 1e-10;
    // The unstable constant mode eventually carries the flow out of the
    // smallness regime; the Caccioppoli bound applies on the portion inside it.
    FlowTrajectory small = traj;
    int keep = 0;
    while (keep < traj.nt() &&
           c1_norm(traj.grid, traj.fields.col(keep)) <= 0.2)
      ++keep;
    small.fields = traj.fields.leftCols(std::max(keep, 1));
    const auto cac = check_caccioppoli(small);
    ok = ok && cac.applicable && std::isfinite(cac.max_ratio);
    ratios[k] = cac.max_ratio;
  }
  ok = ok && std::abs(ratios[0] - ratios[1]) <= 0.1 * std::max(ratios[0], ratios[1]);
  r.seconds = elapsed(start);
  r.pass = ok;
  r.detail = "max relative residual " + fmt(worst_resid) + ", max uphill step " +
             fmt(worst_increase) + ", Caccioppoli ratios " + fmt(ratios[0]) + " / " +
             fmt(ratios[1]);
  return r;
}

CriterionResult integrability_criterion() {
  CriterionResult r{7, "integrability of the equator (n = 512)", false, "", 0};
  const auto start = Clock::now();
  auto F = builtin_sphere_functional();
  const PeriodicGrid g(512);
  const auto split = gradient_split(F, g);
  const auto es = eigendecompose(split.linear);
  const auto red = make_reduced(split, es);
  const double base = 2.0 * M_PI;

  double max_energy_defect = 0.0, max_gradient = 0.0;
  bool ok = true;
  auto a_fin_at = [&](double a1, double a2) {
    Vector a(2);
    a << a1, a2;
    const auto sample = critical_set_sample(red, a);
    max_gradient = std::max(max_gradient, sample.gradient_norm);
    return a_fin(red, a);
  };
  const double lim = 0.1 / std::sqrt(2.0);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double a1 = -lim + 2.0 * lim * i / 4.0;
      const double a2 = -lim + 2.0 * lim * j / 4.0;
      const double defect = std::abs(a_fin_at(a1, a2) - base);
      max_energy_defect = std::max(max_energy_defect, defect);
    }
  }
  ok = max_energy_defect <= 1e-6 && max_gradient <= 1e-8;

  const double d = 0.05;
  const double g1 = (a_fin_at(d, 0.0) - a_fin_at(-d, 0.0)) / (2.0 * d);
  const double g2 = (a_fin_at(0.0, d) - a_fin_at(0.0, -d)) / (2.0 * d);
  const double grad0 = std::hypot(g1, g2);
  ok = ok && grad0 <= 1e-8;

  r.seconds = elapsed(start);
  r.pass = ok;
  r.detail = "max energy defect " + fmt(max_energy_defect) + ", max gradient norm " +
             fmt(max_gradient) + ", gradient at 0 " + fmt(grad0);
  return r;
}

CriterionResult mz_criterion(std::uint64_t seed) {
  CriterionResult r{8, "differential-inequality trichotomy Monte Carlo", false, "", 0};
  const auto start = Clock::now();
  const double eps = 0.01;
  const auto rep = mz_monte_carlo(eps, 50.0, 0.01, 1000, seed);
  const double bound = 1.1 * 8.0 * eps * (2.0 + 8.0 * eps);
  r.seconds = elapsed(start);
  r.pass = rep.passes == rep.trials && rep.max_case_b_constant <= bound &&
           r.seconds < 60.0;
  r.detail = std::to_string(rep.passes) + "/" + std::to_string(rep.trials) +
             " trials (A: " + std::to_string(rep.case_a) + ", B: " +
             std::to_string(rep.case_b) + "), max case-B constant " +
             fmt(rep.max_case_b_constant) + " <= " + fmt(bound) + ", " +
             fmt(r.seconds) + " s";
  return r;
}

ScalarTrajectory ascending(ScalarTrajectory traj) {
  if (traj.times.size() > 1 && traj.times.front() > traj.times.back()) {
    std::reverse(traj.times.begin(), traj.times.end());
    std::reverse(traj.s.begin(), traj.s.end());
  }
  return traj;
}

CriterionResult slow_examples_criterion() {
  CriterionResult r{9, "slow-convergence warped metrics and spacetime integrals",
                    false, "", 0};
  const auto start = Clock::now();
  bool ok = true;
  double worst_residual = 0.0;
  for (const char* name : {"exp", "poly"}) {
    const auto arr = builtin_arrival(name);
    const auto metric = build_warping(arr);
    const auto traj = latitude_flow(metric, 1.0, 0.0, -20.0, 1e-3);
    const auto rep = arrival_time_check(traj, arr);
    worst_residual = std::max(worst_residual, rep.residual);
    ok = ok && rep.residual <= 1e-8;
  }

  const auto metric_e = build_warping(builtin_arrival("exp"));
  const auto audit_e = l1_hypothesis_audit(
      ascending(latitude_flow(metric_e, 1.0, 0.0, -300.0, 1e-2)), {50, 100, 200});
  ok = ok && audit_e.convergent;

  const auto metric_p = build_warping(builtin_arrival("poly"));
  const auto audit_p = l1_hypothesis_audit(
      ascending(latitude_flow(metric_p, 1.0, 0.0, -1.1e4, 1e-2)),
      {100, 300, 1000, 3000, 10000});
  ok = ok && !audit_p.convergent && audit_p.log_fit_residual <= 0.05;

  const auto metric_s = build_warping(builtin_arrival("sublog"));
  const auto audit_s = l1_hypothesis_audit(
      ascending(latitude_flow(metric_s, 1.0, 0.0, -1.1e4, 1e-2)),
      {100, 300, 1000, 3000, 10000});
  ok = ok && !audit_s.convergent;

  r.seconds = elapsed(start);
  r.pass = ok;
  r.detail = "worst arrival residual " + fmt(worst_residual) + ", audits " +
             (audit_e.convergent ? "conv" : "div") + "/" +
             (audit_p.convergent ? "conv" : "div") + "/" +
             (audit_s.convergent ? "conv" : "div") + ", poly log-fit residual " +
             fmt(audit_p.log_fit_residual);
  return r;
}

CriterionResult parametric_criterion() {
  CriterionResult r{10, "parametric latitude flow invariant and extinction", false,
                    "", 0};
  const auto start = Clock::now();
  bool ok = true;
  double worst_inv = 0.0, worst_ext = 0.0;
  for (double phi0 : {0.3, 0.8, 1.3}) {
    const auto traj = evolve_parametric_latitude(phi0, 0.0, 5.0, 1e-4);
    const double c0 = std::sin(phi0);
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      worst_inv = std::max(
          worst_inv, std::abs(std::sin(traj.phis[i]) * std::exp(-traj.times[i]) - c0));
    ok = ok && traj.extinct;
    const double ext_err = std::abs(traj.extinction_time + std::log(std::sin(phi0)));
    worst_ext = std::max(worst_ext, ext_err);
  }
  ok = ok && worst_inv <= 1e-8 && worst_ext <= 1e-6;
  r.seconds = elapsed(start);
  r.pass = ok;
  r.detail = "max invariant drift " + fmt(worst_inv) + ", max extinction error " +
             fmt(worst_ext);
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  Setup setup;
  out.push_back(spectrum_criterion());
  out.push_back(closed_form_criterion(setup));
  out.push_back(tangency_criterion());
  out.push_back(envelope_criterion(setup));
  out.push_back(decay_criterion(setup));
  out.push_back(energy_identity_criterion());
  out.push_back(integrability_criterion());
  out.push_back(mz_criterion(seed));
  out.push_back(slow_examples_criterion());
  out.push_back(parametric_criterion());
  return out;
}

}  // namespace latflow
