#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latflow/mz.hpp"

using namespace latflow;

namespace {

MZSystem autonomous(double eps, double a, double b, double c) {
  MZSystem sys;
  sys.eps = eps;
  sys.alpha = [a](double) { return a; };
  sys.beta = [b](double) { return b; };
  sys.gamma = [c](double) { return c; };
  return sys;
}

}  // namespace

TEST_CASE("frozen coefficients reproduce the uncoupled exponentials") {
  const auto sys = autonomous(0.01, 0.0, 0.0, 0.0);
  const auto traj = integrate_mz(sys, 0.0, 0.0, 1e-3, 20.0, 1e-3);
  // z' = z exactly: pure exponential growth from the seed.
  const double expect = 1e-3 * std::exp(20.0);
  CHECK(traj.z.back() == doctest::Approx(expect).epsilon(1e-8));
  CHECK(traj.x.back() == 0.0);
  CHECK(traj.y.back() == 0.0);
}

TEST_CASE("trajectories satisfy the differential inequalities") {
  MZSystem sys;
  sys.eps = 0.01;
  sys.alpha = [](double s) { return std::sin(0.7 * s); };
  sys.beta = [](double s) { return std::cos(1.3 * s); };
  sys.gamma = [](double s) { return 0.5 * std::sin(0.4 * s + 1.0); };
  const double ds = 1e-3;
  const auto traj = integrate_mz(sys, 0.5, 0.0, 0.2, 30.0, ds);

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.times.size(); ++i) {
    const double tot = traj.x[i] + traj.y[i] + traj.z[i];
    const double xp = (traj.x[i + 1] - traj.x[i - 1]) / (2.0 * ds);
    const double yp = (traj.y[i + 1] - traj.y[i - 1]) / (2.0 * ds);
    const double zp = (traj.z[i + 1] - traj.z[i - 1]) / (2.0 * ds);
    const double tol = 1e-4 * std::max(tot, 1.0);
    worst = std::max(worst, std::abs(xp) - sys.eps * tot - tol);
    worst = std::max(worst, yp + traj.y[i] - sys.eps * (traj.x[i] + traj.z[i]) - tol);
    worst = std::max(worst, -(zp - traj.z[i] + sys.eps * (traj.x[i] + traj.y[i])) - tol);
    worst = std::max(worst, -std::min({traj.x[i], traj.y[i], traj.z[i]}));
  }
  CHECK(worst <= 0.0);
}

TEST_CASE("pure-x seeds classify as the x-dominated case") {
  const auto sys = autonomous(0.01, 0.0, 0.0, 0.0);
  const auto traj = integrate_mz(sys, 1.0, 0.0, 0.0, 30.0, 1e-2);
  const auto rep = verify_trichotomy(traj);
  CHECK(rep.which == MZCase::A);
  CHECK(rep.initial_segment);
  CHECK(rep.slaved_neutral);
  CHECK(rep.pass);
  CHECK(rep.s_star == doctest::Approx(0.0));  // z stays below forever
}

TEST_CASE("pure-z seeds classify as the z-dominated case") {
  const auto sys = autonomous(0.01, 0.0, 0.0, 0.0);
  const auto traj = integrate_mz(sys, 0.0, 0.0, 1.0, 30.0, 1e-2);
  const auto rep = verify_trichotomy(traj);
  CHECK(rep.which == MZCase::B);
  CHECK(rep.case_b_bound);
  CHECK(rep.pass);
  CHECK(rep.case_b_constant <= 8.0 * 0.01 * (2.0 + 8.0 * 0.01));
}

TEST_CASE("neutral seeds that never decay are flagged") {
  // y(-S) > 0 with x = z = 0 breaks the decaying-neutral hypothesis proxy;
  // the slaving bound must fail at the seed.
  const auto sys = autonomous(0.01, 0.0, 0.0, 0.0);
  const auto traj = integrate_mz(sys, 0.0, 1.0, 0.0, 20.0, 1e-2);
  const auto rep = verify_trichotomy(traj);
  CHECK_FALSE(rep.slaved_neutral);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("input validation") {
  const auto sys = autonomous(0.01, 0.0, 0.0, 0.0);
  CHECK_THROWS_AS(integrate_mz(sys, -1.0, 0.0, 1.0, 10.0, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(integrate_mz(sys, 0.0, 0.0, 0.0, 10.0, 1e-2), std::invalid_argument);
  CHECK_THROWS_AS(integrate_mz(autonomous(0.2, 0, 0, 0), 1.0, 0.0, 0.0, 10.0, 1e-2),
                  std::invalid_argument);
  CHECK_THROWS_AS(mz_monte_carlo(0.01, 50.0, 1e-2, 0, 1), std::invalid_argument);
}

TEST_CASE("Monte Carlo: deterministic, and every trial verifies") {
  const auto rep1 = mz_monte_carlo(0.01, 50.0, 1e-2, 100, 777);
  const auto rep2 = mz_monte_carlo(0.01, 50.0, 1e-2, 100, 777);
  CHECK(rep1.passes == 100);
  CHECK(rep1.case_a + rep1.case_b == 100);
  CHECK(rep1.max_case_b_constant == rep2.max_case_b_constant);
  REQUIRE(rep1.records.size() == rep2.records.size());
  CHECK(rep1.records[37].neutral_margin == rep2.records[37].neutral_margin);

  // Different seeds explore different systems.
  const auto rep3 = mz_monte_carlo(0.01, 50.0, 1e-2, 100, 778);
  CHECK(rep3.max_case_b_constant != rep1.max_case_b_constant);
}
