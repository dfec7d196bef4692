#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latflow/ancient.hpp"
#include "latflow/functional.hpp"
#include "latflow/spectral.hpp"

using namespace latflow;

namespace {

struct Fixture {
  EllipticFunctional F = builtin_sphere_functional();
  PeriodicGrid g{64};
  GradientSplit split = gradient_split(F, g);
  EigenSystem es = eigendecompose(split.linear);
  AncientOptions opts;

  Fixture() {
    opts.T_max = 6.0;
    opts.dt = 1e-3;
  }

  Vector amp(double a) const {
    Vector v(es.index);
    v << a;
    return v;
  }
};

double closed_form(double a, double t) {
  return 2.0 * std::atan(std::tan(a / (2.0 * std::sqrt(2.0 * M_PI))) * std::exp(t));
}

}  // namespace

TEST_CASE("zero data gives the equator in one iteration") {
  Fixture fx;
  const auto sol = construct_ancient(fx.split, fx.es, fx.amp(0.0), fx.opts);
  CHECK(sol.iterations == 1);
  CHECK(sol.traj.fields.cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(sol.weighted_distance <= 1e-14);
}

TEST_CASE("constructed solution matches the constant-mode closed form") {
  Fixture fx;
  const auto sol = construct_ancient(fx.split, fx.es, fx.amp(0.1), fx.opts);

  double err = 0.0;
  for (int i = 0; i < sol.traj.nt(); ++i) {
    const double oracle = closed_form(0.1, sol.traj.time(i));
    err = std::max(err, (sol.traj.fields.col(i).array() - oracle).abs().maxCoeff());
  }
  CHECK(err <= 1e-6);

  // Rotational symmetry survives: constant in theta at every time.
  double spread = 0.0;
  for (int i = 0; i < sol.traj.nt(); ++i)
    spread = std::max(spread, sol.traj.fields.col(i).maxCoeff() -
                                  sol.traj.fields.col(i).minCoeff());
  CHECK(spread <= 1e-6);

  // Trace condition: the unstable projection at t = 0 equals the data.
  const Vector c0 = fx.es.mode_coefficients(sol.traj.fields.col(sol.traj.nt() - 1));
  CHECK(std::abs(c0[0] - 0.1) <= 1e-8);
}

TEST_CASE("Picard iteration contracts geometrically") {
  Fixture fx;
  const auto sol = construct_ancient(fx.split, fx.es, fx.amp(0.1), fx.opts);
  REQUIRE(sol.iteration_distances.size() >= 2);
  for (std::size_t i = 1; i < sol.iteration_distances.size(); ++i) {
    if (sol.iteration_distances[i] <= 1e-13) break;  // hit the roundoff floor
    CHECK(sol.iteration_distances[i] <= 0.5 * sol.iteration_distances[i - 1]);
  }
}

TEST_CASE("tolerance refinement pins down one solution in the ball") {
  Fixture fx;
  AncientOptions loose = fx.opts, tight = fx.opts;
  loose.tol = 1e-6;
  tight.tol = 1e-12;
  const auto s1 = construct_ancient(fx.split, fx.es, fx.amp(0.15), loose);
  const auto s2 = construct_ancient(fx.split, fx.es, fx.amp(0.15), tight);
  CHECK((s1.traj.fields - s2.traj.fields).cwiseAbs().maxCoeff() <= 10.0 * loose.tol);
}

TEST_CASE("parameters outside the convergence setup are rejected") {
  Fixture fx;
  CHECK_THROWS_AS(construct_ancient(fx.split, fx.es, fx.amp(0.5), fx.opts),
                  std::domain_error);
  AncientOptions bad = fx.opts;
  bad.delta0 = 1.5;  // must stay below the unstable rate
  CHECK_THROWS_AS(construct_ancient(fx.split, fx.es, fx.amp(0.1), bad),
                  std::invalid_argument);
}

TEST_CASE("tangency: symmetrized difference quotients converge to the mode") {
  Fixture fx;
  Vector dir(1);
  dir << 1.0;
  const auto rep = tangency_check(fx.split, fx.es, dir, {0.2, 0.1}, fx.opts);
  REQUIRE(rep.deviations.size() == 2);
  CHECK(rep.deviations[0] > rep.deviations[1]);
  CHECK(rep.first_ratio >= 3.5);  // quadratic-order halving
}

TEST_CASE("weighted envelope: the deviation from the mode is cubic here") {
  Fixture fx;
  std::vector<AncientSolution> sols;
  for (double a : {0.05, 0.1, 0.2})
    sols.push_back(construct_ancient(fx.split, fx.es, fx.amp(a), fx.opts));
  const auto rep = verify_quadratic_envelope(sols);

  CHECK(std::isfinite(rep.mu));
  CHECK(rep.mu > 0.0);
  // The constant-mode deviation 2 atan(tan(b) e^t) - 2 b e^t is odd in the
  // amplitude, so the distance scales as |a|^3: doubling a multiplies it by
  // 8, and distance/|a|^2 spreads by the amplitude ratio 4, not by O(1).
  CHECK(rep.distances[1] / rep.distances[0] == doctest::Approx(8.0).epsilon(0.15));
  CHECK(rep.distances[2] / rep.distances[1] == doctest::Approx(8.0).epsilon(0.15));
  CHECK(rep.ratio_spread == doctest::Approx(4.0).epsilon(0.15));
}
