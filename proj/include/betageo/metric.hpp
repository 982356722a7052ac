#pragma once

#include "betageo/point.hpp"

namespace betageo {

/// Fisher information matrix at a point. Symmetric, positive definite.
struct MetricTensor {
  double g_aa;
  double g_ab;
  double g_bb;

  double det() const { return g_aa * g_bb - g_ab * g_ab; }

  /// g(u, v) for parameter-space vectors u = (u_a, u_b), v = (v_a, v_b).
  double inner(double u_a, double u_b, double v_a, double v_b) const {
    return g_aa * u_a * v_a + g_ab * (u_a * v_b + u_b * v_a) + g_bb * u_b * v_b;
  }
};

/// Coefficients of the geodesic equations
///
///   alpha'' + a_ab alpha'^2 + b_ab alpha' beta' + c_ab beta'^2 = 0
///   beta''  + a_ba beta'^2  + b_ba alpha' beta' + c_ba alpha'^2 = 0
///
/// where the suffix gives the argument order of a(x, y), b(x, y), c(x, y).
/// `d` is their shared denominator, the metric determinant.
struct ChristoffelCoeffs {
  double a_ab;
  double b_ab;
  double c_ab;
  double a_ba;
  double b_ba;
  double c_ba;
  double d;
};

MetricTensor metric_tensor(const BetaPoint& p);

/// psi'(a) psi'(b) - psi'(a+b) (psi'(a) + psi'(b)).
double det_metric(const BetaPoint& p);

/// (1 + a + b) / (2 a b (a + b)^2), a strict lower bound on det_metric that
/// is also its leading behaviour as both shapes grow.
double det_metric_lower_bound(const BetaPoint& p);

/// det_metric evaluated through its double-integral (Laplace convolution)
/// representation. Throws ConvergenceError if the adaptive quadrature cannot
/// certify `rel_tol`; rel_tol must lie in [1e-10, 1e-2].
double det_metric_quadrature(const BetaPoint& p, double rel_tol);

ChristoffelCoeffs christoffel(const BetaPoint& p);

/// Gaussian (sectional) curvature, evaluated in its factorized form.
double sectional_curvature(const BetaPoint& p);

/// Limit of the curvature as the other shape goes to zero.
double curvature_limit_k1(double alpha);

/// Limit of the curvature as the other shape goes to infinity.
double curvature_limit_k2(double alpha);

/// Smallest curvature found on a 400x400 log-spaced grid over [1e-3, 1e3]^2,
/// attained at the (1e3, 1e3) corner as K approaches -1/2. The curvature is
/// bounded below but no closed-form bound is known; this is an empirical
/// constant, not a proven one.
inline constexpr double kCurvatureGridMinimum = -0.49999987491757991;

}  // namespace betageo
