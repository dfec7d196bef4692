#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "latflow/functional.hpp"
#include "latflow/reduction.hpp"
#include "latflow/spectral.hpp"

using namespace latflow;

namespace {

struct Fixture {
  EllipticFunctional F = builtin_sphere_functional();
  PeriodicGrid g{64};
  GradientSplit split = gradient_split(F, g);
  EigenSystem es = eigendecompose(split.linear);
  ReducedFunctional red = make_reduced(split, es);

  Vector a2(double a1, double a2_) const {
    Vector v(2);
    v << a1, a2_;
    return v;
  }
};

}  // namespace

TEST_CASE("projected Newton solve: zero maps to zero") {
  Fixture fx;
  std::vector<double> history;
  const Field f =
      psi_solve(fx.split, fx.es, Field(fx.g), Field(fx.g), 1e-12, 50, &history);
  CHECK(f.values.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(history.size() <= 2);
}

TEST_CASE("Newton iteration is quadratically convergent near the equator") {
  Fixture fx;
  std::vector<double> history;
  psi_solve(fx.split, fx.es, iota_zero(fx.es, fx.a2(0.1, 0.05)), Field(fx.g), 1e-13, 50,
            &history);
  REQUIRE(history.size() >= 3);
  // Each step at least squares the residual until roundoff.
  for (std::size_t i = 1; i + 1 < history.size(); ++i) {
    if (history[i] <= 1e-13) break;
    CHECK(history[i] <= 2.0 * history[i - 1] * history[i - 1] + 1e-14);
  }
}

TEST_CASE("stagnation guard trips instead of looping") {
  Fixture fx;
  CHECK_THROWS_AS(psi_solve(fx.split, fx.es, iota_zero(fx.es, fx.a2(0.1, 0.0)),
                            Field(fx.g), 1e-15, 1),
                  std::runtime_error);
}

TEST_CASE("neutral projection of the reduced solution matches the data") {
  Fixture fx;
  const Vector a = fx.a2(0.06, -0.04);
  const Field f = psi_of_a(fx.red, a);
  const Vector coeffs = fx.es.mode_coefficients(f.values);
  CHECK(std::abs(coeffs[fx.es.index] - a[0]) <= 1e-6);
  CHECK(std::abs(coeffs[fx.es.index + 1] - a[1]) <= 1e-6);
}

TEST_CASE("reduced energy: exact at the equator, rotation symmetric nearby") {
  Fixture fx;
  CHECK(a_fin(fx.red, fx.a2(0.0, 0.0)) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));

  // A quarter turn of the circle maps one kernel direction to the other
  // exactly on a grid divisible by four.
  const double e1 = a_fin(fx.red, fx.a2(0.08, 0.0));
  const double e2 = a_fin(fx.red, fx.a2(0.0, 0.08));
  CHECK(e1 == doctest::Approx(e2).epsilon(1e-12));

  // The whole neighborhood is energy-flat at the resolution of the scheme.
  CHECK(std::abs(e1 - 2.0 * M_PI) <= 1e-6);
}

TEST_CASE("critical-set samples have small gradient norm") {
  Fixture fx;
  const auto sample = critical_set_sample(fx.red, fx.a2(0.05, 0.05), 1e-5);
  CHECK(sample.gradient_norm <= 1e-5);
  CHECK(sample.critical);
  // The tilted-circle field is a genuine O(|a|) deformation, not zero.
  CHECK(sample.field.values.cwiseAbs().maxCoeff() >= 0.01);
}

TEST_CASE("integrability check along the Jacobi fields") {
  Fixture fx;
  std::vector<Field> dirs = {Field(fx.g, fx.es.phis.col(fx.es.index)),
                             Field(fx.g, fx.es.phis.col(fx.es.index + 1))};
  const auto rep = check_integrability(fx.red, dirs, {0.1, 0.05, 0.025});
  REQUIRE(rep.directions.size() == 2);
  CHECK(rep.max_energy_defect <= 1e-6);
  for (const auto& d : rep.directions) {
    // Tilted circles depend oddly on the tilt: the normalized deviation from
    // the Jacobi field vanishes quadratically in the scale.
    CHECK(d.fitted_order >= 1.8);
    CHECK(d.deviations.front() > d.deviations.back());
  }

  CHECK_THROWS(check_integrability(fx.red, {Field(fx.g)}, {0.1}));
  CHECK_THROWS(check_integrability(fx.red, dirs, {0.1, -0.05}));
}
