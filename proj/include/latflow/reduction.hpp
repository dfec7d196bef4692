#pragma once

#include <vector>

#include "latflow/functional.hpp"
#include "latflow/spectral.hpp"

namespace latflow {

/// Newton solve of gradient(f) + Pi_0 f = w starting from `guess`.
/// Converges quadratically to `tol` inside the reduction neighborhood;
/// stagnation raises an error. Residual L2 norms per step are appended to
/// `history` when given.
Field psi_solve(const GradientSplit& split, const EigenSystem& es, const Field& w,
                const Field& guess, double tol = 1e-10, int max_iterations = 50,
                std::vector<double>* history = nullptr);

/// The finite-dimensional reduction a -> (Psi(iota_0(a)), A_fin(a)).
struct ReducedFunctional {
  GradientSplit split;
  EigenSystem es;
  double newton_tol = 1e-10;

  int K() const { return es.nullity; }
};

ReducedFunctional make_reduced(const GradientSplit& split, const EigenSystem& es,
                               double newton_tol = 1e-10);

Field psi_of_a(const ReducedFunctional& red, const Vector& a);
double a_fin(const ReducedFunctional& red, const Vector& a);

struct CriticalSample {
  Field field;
  double gradient_norm = 0.0;
  bool critical = false;  // gradient_norm <= threshold
};

CriticalSample critical_set_sample(const ReducedFunctional& red, const Vector& a,
                                   double threshold = 1e-8);

struct IntegrabilityDirection {
  std::vector<double> scales;
  std::vector<double> energy_defects;  // |A_fin(t a) - A(0)|
  std::vector<double> deviations;      // ||(1/t) f_t - phi||_{L2}
  double fitted_order = 0.0;           // slope of log(deviation) vs log(t)
};

struct IntegrabilityReport {
  std::vector<IntegrabilityDirection> directions;
  double max_energy_defect = 0.0;
};

/// Definition-of-integrability check along the given Jacobi fields.
IntegrabilityReport check_integrability(const ReducedFunctional& red,
                                        const std::vector<Field>& directions,
                                        const std::vector<double>& scales);

}  // namespace latflow
