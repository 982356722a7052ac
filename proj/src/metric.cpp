#include "betageo/metric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "betageo/errors.hpp"
#include "betageo/special.hpp"

namespace betageo {

MetricTensor metric_tensor(const BetaPoint& p) {
  const double ta = trigamma(p.alpha());
  const double tb = trigamma(p.beta());
  const double ts = trigamma(p.alpha() + p.beta());
  return {ta - ts, -ts, tb - ts};
}

double det_metric(const BetaPoint& p) {
  const double ta = trigamma(p.alpha());
  const double tb = trigamma(p.beta());
  const double ts = trigamma(p.alpha() + p.beta());
  return ta * tb - ts * (ta + tb);
}

double det_metric_lower_bound(const BetaPoint& p) {
  const double a = p.alpha();
  const double b = p.beta();
  const double s = a + b;
  return (1.0 + s) / (2.0 * a * b * s * s);
}

namespace {

// u / (1 - exp(-t u)), with the removable singularity at t u = 0 expanded.
double removable_ratio(double t, double u) {
  const double z = t * u;
  if (z < 1e-4) return (1.0 + z / 2.0 + z * z / 12.0) / t;
  return u / -std::expm1(-z);
}

// Inner integrand over x in (0, 1) at fixed t > 0, without the t^3 factor.
// The product (e^{b t x} - 1)(e^{a t (1-x)} - 1) e^{-(a+b) t} is regrouped
// into decaying exponentials so nothing overflows for large t.
double inner_integrand(double a, double b, double t, double x) {
  const double y = 1.0 - x;
  const double kernel = removable_ratio(t, x) * removable_ratio(t, y);
  const double cross = std::expm1(-b * t * x) * std::expm1(-a * t * y) *
                       std::exp(-t * (b * y + a * x));
  return kernel * (cross - std::exp(-(a + b) * t));
}

}  // namespace

double det_metric_quadrature(const BetaPoint& p, double rel_tol) {
  if (!(rel_tol >= 1e-10 && rel_tol <= 1e-2)) {
    throw DomainError("det_metric_quadrature: rel_tol must lie in [1e-10, 1e-2]");
  }
  using boost::math::quadrature::gauss_kronrod;
  const double a = p.alpha();
  const double b = p.beta();
  const double slowest = std::min(a, b);

  // The outer integrand decays like t^2 e^{-min(a,b) t} / min(a,b)^2. Truncate
  // where that tail drops far below the target, measured against the lower
  // bound as a scale for the determinant.
  const double target = 1e-3 * rel_tol * det_metric_lower_bound(p);
  double upper = 1.0 / slowest;
  while (upper * upper * std::exp(-slowest * upper) / (slowest * slowest * slowest) > target) {
    upper *= 1.25;
  }

  const double inner_tol = std::max(1e-13, 1e-3 * rel_tol);
  const double outer_tol = 1e-2 * rel_tol;
  bool inner_failed = false;

  auto outer = [&](double t) {
    if (t <= 0.0) return 0.0;
    double err = 0.0;
    double l1 = 0.0;
    const double inner = gauss_kronrod<double, 21>::integrate(
        [&](double x) { return inner_integrand(a, b, t, x); }, 0.0, 1.0, 20, inner_tol, &err,
        &l1);
    if (err > std::max(inner_tol * l1, 1e3 * std::numeric_limits<double>::epsilon() * l1)) {
      inner_failed = true;
    }
    return t * t * t * inner;
  };

  double err = 0.0;
  double l1 = 0.0;
  const double value =
      gauss_kronrod<double, 31>::integrate(outer, 0.0, upper, 20, outer_tol, &err, &l1);
  if (inner_failed || !std::isfinite(value) || err > rel_tol * std::abs(value)) {
    throw ConvergenceError("det_metric_quadrature: could not reach rel_tol " +
                           std::to_string(rel_tol) + " (error estimate " +
                           std::to_string(err) + ")");
  }
  return value;
}

ChristoffelCoeffs christoffel(const BetaPoint& p) {
  const double x = p.alpha();
  const double y = p.beta();
  const auto [t_x, q_x] = trigamma_tetragamma(x);
  const auto [t_y, q_y] = trigamma_tetragamma(y);
  const auto [t_s, q_s] = trigamma_tetragamma(x + y);
  const double d = t_x * t_y - t_s * (t_x + t_y);
  const double half_inv = 0.5 / d;
  ChristoffelCoeffs c{};
  c.a_ab = half_inv * (q_x * t_y - q_x * t_s - t_y * q_s);
  c.b_ab = -t_y * q_s / d;
  c.c_ab = half_inv * (q_y * t_s - t_y * q_s);
  c.a_ba = half_inv * (q_y * t_x - q_y * t_s - t_x * q_s);
  c.b_ba = -t_x * q_s / d;
  c.c_ba = half_inv * (q_x * t_s - t_x * q_s);
  c.d = d;
  return c;
}

double sectional_curvature(const BetaPoint& p) {
  const double a = p.alpha();
  const double b = p.beta();
  const auto [t_a, q_a] = trigamma_tetragamma(a);
  const auto [t_b, q_b] = trigamma_tetragamma(b);
  const auto [t_s, q_s] = trigamma_tetragamma(a + b);
  const double d = t_a * t_b - t_s * (t_a + t_b);
  const double subadditive_gap = t_a / q_a + t_b / q_b - t_s / q_s;
  return (q_a * q_b * q_s) / (4.0 * d * d) * subadditive_gap;
}

double curvature_limit_k1(double alpha) {
  const auto psi = polygamma_all(alpha);
  return 0.75 - psi[1] * psi[3] / (2.0 * psi[2] * psi[2]);
}

double curvature_limit_k2(double alpha) {
  const auto [t, q] = trigamma_tetragamma(alpha);
  const double shifted = alpha * t - 1.0;
  return (alpha * q + t) / (4.0 * shifted * shifted);
}

}  // namespace betageo
