#pragma once

#include <optional>
#include <span>
#include <vector>

#include "betageo/canonical.hpp"
#include "betageo/frechet.hpp"
#include "betageo/point.hpp"

namespace betageo {

/// The line of beta parameters with mean p: beta = (1/p - 1) alpha.
class MeanLine {
 public:
  explicit MeanLine(double p);

  double p() const { return p_; }
  /// beta / alpha along the line.
  double ratio() const { return ratio_; }
  BetaPoint at(double alpha) const { return {alpha, ratio_ * alpha}; }
  bool contains(const BetaPoint& b) const;

 private:
  double p_;
  double ratio_;
};

struct ProjectionOptions {
  /// Required Fisher-orthogonality of the connecting geodesic to the line at
  /// the result. Must lie in [1e-10, 1e-4].
  double tol = 1e-9;
  /// Starting alpha on the line; defaults to p (alpha + beta) of the input.
  std::optional<double> start_alpha;
};

struct Projection {
  BetaPoint point;
  double distance;
  /// <log(point, b), T> for the unit tangent T of the line at point.
  double orthogonality;
};

/// Closest point to b on the line, by root finding on the derivative of
/// half the squared distance along the log-parameterized line.
Projection project_to_line(const BetaPoint& b, const MeanLine& line,
                           const ProjectionOptions& options = {});

/// Component k (1-based) is the projection of (n-k+1, n-k+1) onto the line
/// of mean p_k.
ProductPoint phi_map(const CanonicalSequence& p);

/// Root-sum-of-squares of componentwise Fisher distances.
double product_distance(const ProductPoint& x, const ProductPoint& y);

/// Product distance between the phi_map images of the canonical sequences.
double rho_distance(const MomentSequence& c1, const MomentSequence& c2);

/// Frechet mean of the phi_map images on B^n, mapped back by reading each
/// component's mean as a canonical moment.
MomentSequence moment_centroid(std::span<const MomentSequence> cs, double tol = 1e-8);

}  // namespace betageo
