#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "latflow/slow.hpp"

using namespace latflow;

namespace {

ScalarTrajectory synthetic(const std::function<double(double)>& s_of_t, double t_lo,
                           double dt) {
  ScalarTrajectory traj;
  const int n = static_cast<int>(std::lround(-t_lo / dt));
  for (int i = 0; i <= n; ++i) {
    const double t = (i == n) ? 0.0 : t_lo + i * dt;
    traj.times.push_back(t);
    traj.s.push_back(s_of_t(t));
  }
  return traj;
}

}  // namespace

TEST_CASE("warping functions of the builtin families match closed forms") {
  // exp: 1/tau' = s so f(s) = -s^2/2; poly: 1/tau' = s^2 so f(s) = -s^3/3.
  const auto exp_metric = build_warping(builtin_arrival("exp"));
  CHECK(std::abs(exp_metric.f(0.5) - (-0.125)) <= 1e-10);
  CHECK(std::abs(exp_metric.f_total - 0.5) <= 1e-10);

  const auto poly_metric = build_warping(builtin_arrival("poly"));
  CHECK(std::abs(poly_metric.f(0.5) - (-1.0 / 24.0)) <= 1e-10);
  CHECK(std::abs(poly_metric.f_total - 1.0 / 3.0) <= 1e-10);

  CHECK(exp_metric.f_prime(0.25) == doctest::Approx(-0.25));
}

TEST_CASE("sublog warping integral agrees with direct quadrature") {
  const auto metric = build_warping(builtin_arrival("sublog"));
  // 1/tau' = s^2 e^{-1/s}; refined composite Simpson on [a, 1] with a tiny
  // left endpoint (integrand vanishes to all orders at 0).
  const auto g = [](double s) { return s * s * std::exp(-1.0 / s); };
  const double a = 1e-4;
  const int n = 200000;
  const double h = (1.0 - a) / n;
  double acc = g(a) + g(1.0);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  const double direct = acc * h / 3.0;
  CHECK(std::abs(metric.f_total - direct) <= 1e-8);
}

TEST_CASE("latitude flows reproduce the closed-form trajectories") {
  const auto exp_metric = build_warping(builtin_arrival("exp"));
  const auto exp_traj = latitude_flow(exp_metric, 1.0, 0.0, -5.0, 1e-3);
  CHECK_FALSE(exp_traj.left_domain);
  CHECK(std::abs(exp_traj.s.back() - std::exp(-5.0)) <= 1e-10);

  const auto poly_metric = build_warping(builtin_arrival("poly"));
  const auto poly_traj = latitude_flow(poly_metric, 1.0, 0.0, -10.0, 1e-3);
  CHECK(std::abs(poly_traj.s.back() - 1.0 / 11.0) <= 1e-10);

  SUBCASE("arrival times match the prescribed profile up to a shift") {
    const auto rep = arrival_time_check(exp_traj, exp_metric.arrival);
    CHECK(std::abs(rep.shift) <= 1e-9);
    CHECK(rep.residual <= 1e-9);
    const auto repp = arrival_time_check(poly_traj, poly_metric.arrival);
    CHECK(repp.residual <= 1e-9);
  }
}

TEST_CASE("sublog family crawls at the inverse-log rate") {
  // Closed form: s(t) = 1 / log(e - t), so s(t) * log|t| -> 1 backwards.
  const auto metric = build_warping(builtin_arrival("sublog"));
  const auto traj = latitude_flow(metric, 1.0, 0.0, -1e4, 1e-1);
  REQUIRE_FALSE(traj.left_domain);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t > -1e2) continue;
    const double product = traj.s[i] * std::log(-t);
    CHECK(product > 0.9);
    CHECK(product < 1.1);
  }
}

TEST_CASE("the flow truncates on leaving the domain") {
  // Forward in time the exp family grows; s exceeds 1 quickly from s0 = 0.9.
  const auto metric = build_warping(builtin_arrival("exp"));
  const auto traj = latitude_flow(metric, 0.9, 0.0, 2.0, 1e-3);
  CHECK(traj.left_domain);
  CHECK(traj.s.back() <= 1.0);
  CHECK(traj.times.back() < 2.0);

  CHECK_THROWS_AS(latitude_flow(metric, 1.5, 0.0, 1.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(latitude_flow(metric, 0.5, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("arrival check rejects degenerate trajectories") {
  ScalarTrajectory traj;
  traj.times = {0.0};
  traj.s = {1.0};
  CHECK_THROWS_AS(arrival_time_check(traj, builtin_arrival("exp")),
                  std::invalid_argument);
}

TEST_CASE("admissibility rejections name the failed property") {
  ArrivalFunction bad;
  bad.name = "decreasing";
  bad.tau = [](double s) { return 1.0 - s; };
  bad.tau_prime = [](double) { return -1.0; };
  CHECK_THROWS_WITH_AS(check_admissible(bad),
                       doctest::Contains("tau' not positive"), std::invalid_argument);

  bad.name = "offset";
  bad.tau = [](double s) { return std::log(s) + 1.0; };
  bad.tau_prime = [](double s) { return 1.0 / s; };
  CHECK_THROWS_WITH_AS(check_admissible(bad), doctest::Contains("tau(1) != 0"),
                       std::invalid_argument);

  bad.name = "finite-limit";
  bad.tau = [](double s) { return s - 1.0; };
  bad.tau_prime = [](double) { return 1.0; };
  CHECK_THROWS_WITH_AS(check_admissible(bad), doctest::Contains("diverge"),
                       std::invalid_argument);

  CHECK_THROWS_AS(builtin_arrival("nonsense"), std::invalid_argument);
}

TEST_CASE("tabulated arrival data interpolates and flows like its source") {
  // Sample the poly family on a grid uniform in 1/s down to s = 0.05.
  std::vector<double> s, tau;
  const int n = 800;
  for (int i = 0; i <= n; ++i) {
    const double u = 20.0 - (20.0 - 1.0) * i / n;  // 1/s from 20 down to 1
    s.push_back(1.0 / u);
    tau.push_back(1.0 - u);
  }
  const auto arr = tabulated_arrival(s, tau);
  CHECK(arr.s_min == doctest::Approx(0.05));
  for (double probe : {0.06, 0.11, 0.31, 0.72, 0.97}) {
    CHECK(std::abs(arr.tau(probe) - (1.0 - 1.0 / probe)) <= 1e-4);
  }

  const auto metric = build_warping(arr);
  const auto traj = latitude_flow(metric, 1.0, 0.0, -5.0, 1e-3);
  CHECK(std::abs(traj.s.back() - 1.0 / 6.0) <= 1e-3);

  SUBCASE("rejects malformed tables") {
    auto s2 = s;
    std::swap(s2[10], s2[11]);
    CHECK_THROWS_AS(tabulated_arrival(s2, tau), std::invalid_argument);
    auto tau2 = tau;
    tau2[5] = tau2[4];
    CHECK_THROWS_AS(tabulated_arrival(s, tau2), std::invalid_argument);
    CHECK_THROWS_AS(tabulated_arrival({0.1, 0.5, 1.0}, {-2.0, -1.0, 0.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("spacetime size audit separates convergent from divergent tails") {
  const auto conv = synthetic([](double t) { return std::exp(t); }, -300.0, 0.05);
  const auto audit = l1_hypothesis_audit(conv, {50.0, 100.0, 200.0});
  CHECK(audit.convergent);
  for (double I : audit.integrals) CHECK(std::abs(I - 1.0) <= 1e-3);

  const auto div = synthetic([](double t) { return 1.0 / (1.0 - t); }, -10100.0, 0.5);
  const auto daudit = l1_hypothesis_audit(div, {100.0, 1000.0, 10000.0});
  CHECK_FALSE(daudit.convergent);
  // The integral is log(1 + T): an exact additive-log profile.
  CHECK(daudit.log_fit_residual <= 0.05);

  CHECK_THROWS_AS(l1_hypothesis_audit(conv, {50.0, 100.0}), std::invalid_argument);
  CHECK_THROWS_AS(l1_hypothesis_audit(conv, {50.0, 100.0, 400.0}),
                  std::invalid_argument);
}
