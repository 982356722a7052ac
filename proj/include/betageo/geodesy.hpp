#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "betageo/metric.hpp"
#include "betageo/point.hpp"

namespace betageo {

/// Second derivatives (alpha'', beta'') along a geodesic.
struct Acceleration {
  double d2_alpha;
  double d2_beta;
};

/// Right-hand side of the geodesic equations at p with velocity v.
Acceleration geodesic_rhs(const BetaPoint& p, double d_alpha, double d_beta);
inline Acceleration geodesic_rhs(const TangentVector& v) {
  return geodesic_rhs(v.base, v.d_alpha, v.d_beta);
}

/// Fisher inner product of two vectors at the same base point.
double fisher_inner(const TangentVector& u, const TangentVector& v);
double fisher_norm(const TangentVector& v);

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Trajectories with a shape at or below `floor`, or above `ceiling`, have
  /// left the representable chart. Above ~1e8 the metric determinant loses
  /// too many digits to cancellation for the step controller to make progress.
  double floor = 1e-8;
  double ceiling = 1e8;
  std::size_t max_steps = 200000;
};

/// Time-sampled geodesic on [0, 1].
struct GeodesicPath {
  std::vector<double> times;
  std::vector<BetaPoint> points;
  std::vector<TangentVector> velocities;

  std::size_t size() const { return times.size(); }
  const BetaPoint& end() const { return points.back(); }
  /// Fisher speed at sample i.
  double speed(std::size_t i) const { return fisher_norm(velocities[i]); }
  /// Fisher length by trapezoidal integration of the sampled speed.
  double length() const;
};

/// Integrate the geodesic with initial velocity v (based at v.base) over
/// [0, 1] and resample it at steps_hint + 1 uniform times from the dense
/// output of an adaptive Dormand-Prince 5(4) integrator. Throws
/// BoundaryEscape if the trajectory leaves the chart.
GeodesicPath exp_map(const TangentVector& v, int steps_hint = 64,
                     const IntegratorOptions& options = {});

/// Endpoint and final velocity of exp_map without storing the path.
TangentVector geodesic_endpoint(const TangentVector& v, const IntegratorOptions& options = {});

struct ShootingOptions {
  IntegratorOptions integrator{};
  /// Newton stops once the endpoint matches the target to this relative
  /// tolerance (measured in log-coordinates).
  double tol = 1e-12;
  /// Results whose endpoint misses the target by more than this are errors.
  double accept_tol = 1e-9;
  int max_iterations = 60;
};

/// Initial velocity of the geodesic from p reaching q at t = 1. `guess`, when
/// given, seeds the Newton shooting iteration (d_alpha, d_beta). Throws
/// ConvergenceError if shooting fails and its continuation fallback fails.
TangentVector log_map(const BetaPoint& p, const BetaPoint& q, const ShootingOptions& options = {},
                      std::optional<std::array<double, 2>> guess = std::nullopt);

/// Fisher-Rao geodesic distance.
double distance(const BetaPoint& p, const BetaPoint& q, const ShootingOptions& options = {});

/// Limit distance |ln(alpha'/alpha)| / sqrt(2) between B(n a, n l a) and
/// B(n a', n l a') as n grows, for any fixed ratio l.
double clt_limit_distance(double alpha, double alpha_prime);

}  // namespace betageo
