#pragma once

#include <cmath>
#include <string>

#include "betageo/errors.hpp"

namespace betageo {

/// A point (alpha, beta) of the beta parameter manifold (0, inf)^2.
class BetaPoint {
 public:
  BetaPoint(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!valid(alpha, beta)) {
      throw DomainError("BetaPoint: shapes must be positive and finite, got (" +
                        std::to_string(alpha) + ", " + std::to_string(beta) + ")");
    }
  }

  static bool valid(double alpha, double beta) {
    return alpha > 0.0 && beta > 0.0 && std::isfinite(alpha) && std::isfinite(beta);
  }

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  /// Mean of the beta distribution, alpha / (alpha + beta).
  double mean() const { return alpha_ / (alpha_ + beta_); }

  /// The point with its two shapes exchanged.
  BetaPoint swapped() const { return {beta_, alpha_}; }

  friend bool operator==(const BetaPoint&, const BetaPoint&) = default;

 private:
  double alpha_;
  double beta_;
};

/// A velocity (d_alpha, d_beta) attached to a base point.
struct TangentVector {
  TangentVector(BetaPoint base, double d_alpha, double d_beta)
      : base(base), d_alpha(d_alpha), d_beta(d_beta) {
    if (!std::isfinite(d_alpha) || !std::isfinite(d_beta)) {
      throw DomainError("TangentVector: components must be finite");
    }
  }

  TangentVector scaled(double s) const { return {base, s * d_alpha, s * d_beta}; }

  BetaPoint base;
  double d_alpha;
  double d_beta;
};

}  // namespace betageo
