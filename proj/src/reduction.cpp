#include "latflow/reduction.hpp"

#include <Eigen/LU>
#include <cmath>

namespace latflow {

Field psi_solve(const GradientSplit& split, const EigenSystem& es, const Field& w,
                const Field& guess, double tol, int max_iterations,
                std::vector<double>* history) {
  const PeriodicGrid& g = es.grid;
  auto neutral = es.phis.middleCols(es.index, es.nullity);
  Matrix P0 = g.h * (neutral * neutral.transpose());

  Field f = guess;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= max_iterations; ++k) {
    Vector F = gradient(split.functional, f).values + P0 * f.values - w.values;
    double res = l2_norm(g, F);
    if (history) history->push_back(res);
    if (res <= tol) return f;
    if (k == max_iterations || res > 2.0 * prev)
      throw std::runtime_error(
          "psi_solve: Newton stagnation, neighborhood of the reduction exceeded");
    prev = res;
    Matrix J = -energy_hessian(split.functional, f) + P0;
    f.values += J.lu().solve(-F);
  }
  return f;
}

ReducedFunctional make_reduced(const GradientSplit& split, const EigenSystem& es,
                               double newton_tol) {
  return ReducedFunctional{split, es, newton_tol};
}

Field psi_of_a(const ReducedFunctional& red, const Vector& a) {
  Field w = iota_zero(red.es, a);
  return psi_solve(red.split, red.es, w, w, red.newton_tol);
}

double a_fin(const ReducedFunctional& red, const Vector& a) {
  return evaluate(red.split.functional, psi_of_a(red, a));
}

CriticalSample critical_set_sample(const ReducedFunctional& red, const Vector& a,
                                   double threshold) {
  CriticalSample s{psi_of_a(red, a)};
  s.gradient_norm = l2_norm(red.es.grid, gradient(red.split.functional, s.field).values);
  s.critical = s.gradient_norm <= threshold;
  return s;
}

IntegrabilityReport check_integrability(const ReducedFunctional& red,
                                        const std::vector<Field>& directions,
                                        const std::vector<double>& scales) {
  if (directions.empty())
    throw std::invalid_argument("check_integrability: no directions given");
  const double energy0 = evaluate(red.split.functional, Field(red.es.grid));

  IntegrabilityReport rep;
  for (const Field& phi : directions) {
    double pn = l2_norm(red.es.grid, phi.values);
    if (pn < 1e-12)
      throw std::invalid_argument("check_integrability: degenerate direction");
    Vector ahat = red.es.mode_coefficients(phi.values).segment(red.es.index, red.es.nullity);

    IntegrabilityDirection dir;
    dir.scales = scales;
    for (double t : scales) {
      if (!(t > 0.0))
        throw std::invalid_argument("check_integrability: scales must be positive");
      Field ft = psi_of_a(red, (t * ahat).eval());
      double defect = std::fabs(evaluate(red.split.functional, ft) - energy0);
      dir.energy_defects.push_back(defect);
      rep.max_energy_defect = std::max(rep.max_energy_defect, defect);
      Vector dev = ft.values / t - phi.values;
      dir.deviations.push_back(l2_norm(red.es.grid, dev));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = static_cast<int>(scales.size());
    for (int i = 0; i < m; ++i) {
      double x = std::log(scales[i]);
      double y = std::log(std::max(dir.deviations[i], 1e-300));
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    dir.fitted_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.directions.push_back(std::move(dir));
  }
  return rep;
}

}  // namespace latflow
