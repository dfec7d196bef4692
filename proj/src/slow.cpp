#include "latflow/slow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace latflow {
namespace {

double adaptive_simpson(const std::function<double(double)>& g, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = g(lm), frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& g, double a, double b,
                 double tol) {
  if (b <= a) return 0.0;
  const double fa = g(a), fb = g(b), fm = g(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(g, a, b, fa, fm, fb, whole, tol, 40);
}

// Integral of g over (low, b] with the endpoint approached by dyadic
// subdivision, so integrable endpoint blow-ups of 1/tau' are handled.
double endpoint_integral(const std::function<double(double)>& g, double low,
                         double b, double tol) {
  if (b <= low) return 0.0;
  if (low > 0.0) return integrate(g, low, b, tol);
  double total = 0.0;
  double hi = b;
  for (int k = 0; k < 60; ++k) {
    const double lo = 0.5 * hi;
    const double piece = integrate(g, lo, hi, tol);
    total += piece;
    if (std::abs(piece) < 1e-16 * std::max(1.0, std::abs(total)) && k > 4) break;
    hi = lo;
  }
  return total;
}

}  // namespace

ArrivalFunction builtin_arrival(const std::string& name) {
  ArrivalFunction arr;
  arr.name = name;
  if (name == "exp") {
    arr.tau = [](double s) { return std::log(s); };
    arr.tau_prime = [](double s) { return 1.0 / s; };
  } else if (name == "poly") {
    arr.tau = [](double s) { return 1.0 - 1.0 / s; };
    arr.tau_prime = [](double s) { return 1.0 / (s * s); };
  } else if (name == "sublog") {
    arr.tau = [](double s) { return std::exp(1.0) - std::exp(1.0 / s); };
    arr.tau_prime = [](double s) { return std::exp(1.0 / s) / (s * s); };
  } else {
    throw std::invalid_argument("unknown arrival function: " + name);
  }
  return arr;
}

ArrivalFunction tabulated_arrival(const std::vector<double>& s,
                                  const std::vector<double>& tau) {
  const std::size_t n = s.size();
  if (n != tau.size() || n < 4)
    throw std::invalid_argument("tabulated arrival: need >= 4 matching samples");
  for (std::size_t i = 1; i < n; ++i) {
    if (s[i] <= s[i - 1])
      throw std::invalid_argument("tabulated arrival: s not strictly increasing");
    if (tau[i] <= tau[i - 1])
      throw std::invalid_argument("tabulated arrival: tau not strictly increasing");
  }
  if (s.front() <= 0.0 || std::abs(s.back() - 1.0) > 1e-12)
    throw std::invalid_argument("tabulated arrival: s range must end at 1");

  // Monotone (Fritsch-Carlson) cubic Hermite interpolation.
  std::vector<double> d(n);
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    delta[i] = (tau[i + 1] - tau[i]) / (s[i + 1] - s[i]);
  d[0] = delta[0];
  d[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = 0.5 * (delta[i - 1] + delta[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = d[i] / delta[i], b = d[i + 1] / delta[i];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      d[i] = t * a * delta[i];
      d[i + 1] = t * b * delta[i];
    }
  }

  auto locate = [s](double x) -> std::size_t {
    auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t i = (it == s.begin()) ? 0 : static_cast<std::size_t>(it - s.begin() - 1);
    return std::min(i, s.size() - 2);
  };
  auto eval = [s, tau, d, locate](double x) {
    const std::size_t i = locate(x);
    const double h = s[i + 1] - s[i];
    const double t = (x - s[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * tau[i] + h * h10 * d[i] + h01 * tau[i + 1] + h * h11 * d[i + 1];
  };
  auto deriv = [s, tau, d, locate](double x) {
    const std::size_t i = locate(x);
    const double h = s[i + 1] - s[i];
    const double t = (x - s[i]) / h;
    const double dh00 = 6 * t * (t - 1), dh10 = (1 - t) * (1 - 3 * t);
    const double dh01 = 6 * t * (1 - t), dh11 = t * (3 * t - 2);
    return (dh00 * tau[i] + h * dh10 * d[i] + dh01 * tau[i + 1] + h * dh11 * d[i + 1]) / h;
  };

  ArrivalFunction arr;
  arr.name = "tabulated";
  arr.tau = eval;
  arr.tau_prime = deriv;
  arr.s_min = s.front();
  return arr;
}

void check_admissible(const ArrivalFunction& arr) {
  const double lo = std::max(arr.s_min, 1e-8);
  for (int i = 0; i <= 64; ++i) {
    const double s = lo + (1.0 - lo) * i / 64.0;
    if (!(arr.tau_prime(s) > 0.0))
      throw std::invalid_argument("inadmissible arrival (" + arr.name +
                                  "): tau' not positive at s=" + std::to_string(s));
  }
  if (std::abs(arr.tau(1.0)) > 1e-10)
    throw std::invalid_argument("inadmissible arrival (" + arr.name +
                                "): tau(1) != 0");
  // Divergence toward the backward limit: either directly large and negative
  // near 0, or (finite tables) a monotone divergence trend across the range.
  if (arr.s_min <= 1e-6) {
    // Along the geometric sequence s = 1e-2, 1e-4, 1e-6 the decrements of a
    // function diverging to -inf must not die off geometrically.
    const double t6 = arr.tau(1e-6);
    const double t4 = arr.tau(1e-4);
    const double t2 = arr.tau(1e-2);
    const bool trend = t6 < t4 && t4 < t2 && (t4 - t6) >= 0.5 * (t2 - t4);
    if (!(t6 < -1e3 || trend))
      throw std::invalid_argument("inadmissible arrival (" + arr.name +
                                  "): tau does not diverge to -inf at 0");
  } else {
    const double ta = arr.tau(arr.s_min);
    const double tb = arr.tau(std::min(1.0, 2.0 * arr.s_min));
    if (!(ta < tb && ta < 0.0))
      throw std::invalid_argument("inadmissible arrival (" + arr.name +
                                  "): no divergence trend at small s");
  }
  // Finiteness of the warping integral: the endpoint quadrature must settle
  // under refinement.
  auto g = [&arr](double s) { return 1.0 / arr.tau_prime(s); };
  const double i1 = endpoint_integral(g, arr.s_min, 1.0, 1e-8);
  const double i2 = endpoint_integral(g, arr.s_min, 1.0, 1e-10);
  if (!std::isfinite(i1) || !std::isfinite(i2) ||
      std::abs(i1 - i2) > 1e-6 * std::max(1.0, std::abs(i2)))
    throw std::invalid_argument("inadmissible arrival (" + arr.name +
                                "): warping integral does not converge");
}

WarpedMetric build_warping(const ArrivalFunction& arr) {
  check_admissible(arr);
  WarpedMetric metric;
  metric.arrival = arr;
  auto g = [arr](double s) { return 1.0 / arr.tau_prime(s); };
  const double s_min = arr.s_min;
  metric.f = [g, s_min](double s) {
    return -endpoint_integral(g, s_min, s, 1e-12);
  };
  metric.f_prime = [arr](double s) { return -1.0 / arr.tau_prime(s); };
  metric.f_total = std::abs(metric.f(1.0));
  return metric;
}

ScalarTrajectory latitude_flow(const WarpedMetric& metric, double s0, double t0,
                               double t1, double dt) {
  if (!(s0 > 0.0 && s0 <= 1.0))
    throw std::invalid_argument("latitude_flow: s0 must lie in (0, 1]");
  if (dt <= 0.0) throw std::invalid_argument("latitude_flow: dt must be positive");

  const double span = t1 - t0;
  const int nsteps = std::max(1, static_cast<int>(std::lround(std::abs(span) / dt)));
  const double h = span / nsteps;
  const double floor = std::max(metric.arrival.s_min, 1e-300);

  auto rhs = [&metric](double s) { return 1.0 / metric.arrival.tau_prime(s); };
  auto in_domain = [floor](double s) { return s > floor && s <= 1.0; };

  ScalarTrajectory traj;
  traj.times.reserve(nsteps + 1);
  traj.s.reserve(nsteps + 1);
  double s = s0;
  traj.times.push_back(t0);
  traj.s.push_back(s);
  for (int i = 0; i < nsteps; ++i) {
    const double k1 = rhs(s);
    const double k2 = rhs(s + 0.5 * h * k1);
    const double k3 = rhs(s + 0.5 * h * k2);
    const double k4 = rhs(s + h * k3);
    const double next = s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!in_domain(next) || !std::isfinite(next)) {
      traj.left_domain = true;
      break;
    }
    s = next;
    traj.times.push_back(t0 + (i + 1) * h);
    traj.s.push_back(s);
  }
  return traj;
}

ArrivalReport arrival_time_check(const ScalarTrajectory& traj,
                                 const ArrivalFunction& arr) {
  if (traj.times.size() < 2)
    throw std::invalid_argument("arrival_time_check: insufficient samples");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double r = traj.times[i] - arr.tau(traj.s[i]);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

L1Audit l1_hypothesis_audit(const ScalarTrajectory& traj,
                            const std::vector<double>& horizons) {
  if (horizons.size() < 3)
    throw std::invalid_argument("l1 audit: need at least three horizons");
  std::vector<double> hs = horizons;
  std::sort(hs.begin(), hs.end());
  if (traj.times.empty() || traj.times.front() > -hs.back() ||
      traj.times.back() < 0.0)
    throw std::invalid_argument("l1 audit: trajectory does not cover the horizons");

  L1Audit audit;
  audit.horizons = hs;
  for (double T : hs) {
    // Trapezoid rule for int_{-T}^0 s(t) dt on the stored samples.
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
      const double ta = traj.times[i], tb = traj.times[i + 1];
      if (tb <= -T || ta >= 0.0) continue;
      const double ca = std::max(ta, -T), cb = std::min(tb, 0.0);
      // Linear interpolation of s at the clipped endpoints.
      auto at = [&](double t) {
        const double w = (t - ta) / (tb - ta);
        return (1.0 - w) * traj.s[i] + w * traj.s[i + 1];
      };
      acc += 0.5 * (at(ca) + at(cb)) * (cb - ca);
    }
    audit.integrals.push_back(acc);
  }

  const std::size_t m = hs.size();
  const double last = audit.integrals[m - 1];
  const double prev = audit.integrals[m - 2];
  audit.convergent = std::abs(last - prev) <= 1e-4 * std::max(std::abs(last), 1e-30);

  // Least-squares fits across horizons: log-log slope (growth exponent) and
  // an additive-log model I ~ a + b log T for the divergence texture.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double lx = 0, ly = 0, lxx = 0, lxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double X = std::log(hs[i]);
    const double Y = std::log(std::max(audit.integrals[i], 1e-300));
    sx += X; sy += Y; sxx += X * X; sxy += X * Y;
    lx += X; ly += audit.integrals[i]; lxx += X * X; lxy += X * audit.integrals[i];
  }
  const double dm = m * sxx - sx * sx;
  audit.growth_exponent = (m * sxy - sx * sy) / dm;
  const double b = (m * lxy - lx * ly) / (m * lxx - lx * lx);
  const double a = (ly - b * lx) / m;
  double rss = 0.0, span = 0.0;
  double imin = audit.integrals[0], imax = audit.integrals[0];
  for (std::size_t i = 0; i < m; ++i) {
    const double e = audit.integrals[i] - (a + b * std::log(hs[i]));
    rss += e * e;
    imin = std::min(imin, audit.integrals[i]);
    imax = std::max(imax, audit.integrals[i]);
  }
  span = std::max(imax - imin, 1e-30);
  audit.log_fit_residual = std::sqrt(rss / m) / span;
  return audit;
}

}  // namespace latflow
