#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "betageo/geodesy.hpp"
#include "betageo/point.hpp"

namespace betageo {

/// A point of the product manifold B^n.
class ProductPoint {
 public:
  explicit ProductPoint(std::vector<BetaPoint> components);

  std::size_t size() const { return components_.size(); }
  const BetaPoint& operator[](std::size_t k) const { return components_[k]; }
  const std::vector<BetaPoint>& components() const { return components_; }

  friend bool operator==(const ProductPoint&, const ProductPoint&) = default;

 private:
  std::vector<BetaPoint> components_;
};

struct KarcherOptions {
  /// Stop once the Fisher norm of the gradient sum_i w_i log(B, B_i) is at
  /// most tol. Must lie in [1e-10, 1e-3].
  double tol = 1e-8;
  std::size_t max_iterations = 200;
  /// Starting point; defaults to the Euclidean mean of the parameters.
  std::optional<BetaPoint> initial;
  ShootingOptions shooting{};
};

struct KarcherResult {
  BetaPoint mean;
  /// sum_i w_i log(mean, B_i); its Fisher norm is the reported residual.
  TangentVector gradient;
  double gradient_norm;
  /// Half the weighted sum of squared distances at `mean`.
  double objective;
  std::size_t iterations;
};

/// Karcher gradient flow B <- exp(B, tau * grad) with tau starting at 1 and
/// halved whenever the objective would increase. `weights` may be empty
/// (uniform); otherwise it must be nonnegative, match `points` in length and
/// sum to 1. Throws ConvergenceError when the iteration budget runs out.
KarcherResult karcher_flow(std::span<const BetaPoint> points, std::span<const double> weights = {},
                           const KarcherOptions& options = {});

/// Weighted Frechet mean, argmin_B sum_i w_i d(B, B_i)^2.
BetaPoint frechet_mean(std::span<const BetaPoint> points, std::span<const double> weights = {},
                       double tol = 1e-8);

/// Frechet mean on B^n with the product metric: the squared distance is a sum
/// over components, so the mean is computed componentwise.
ProductPoint product_frechet_mean(std::span<const ProductPoint> points, double tol = 1e-8);

}  // namespace betageo
