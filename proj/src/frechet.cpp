#include "betageo/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "betageo/errors.hpp"

namespace betageo {

ProductPoint::ProductPoint(std::vector<BetaPoint> components) : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("ProductPoint: needs at least one component");
}

namespace {

std::vector<double> checked_weights(std::span<const BetaPoint> points,
                                    std::span<const double> weights) {
  if (points.empty()) throw DomainError("frechet_mean: empty point set");
  if (weights.empty()) return std::vector<double>(points.size(), 1.0 / points.size());
  if (weights.size() != points.size()) {
    throw DomainError("frechet_mean: " + std::to_string(weights.size()) + " weights for " +
                      std::to_string(points.size()) + " points");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("frechet_mean: negative weight");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("frechet_mean: weights must sum to 1");
  return {weights.begin(), weights.end()};
}

BetaPoint euclidean_mean(std::span<const BetaPoint> points, const std::vector<double>& w) {
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    a += w[i] * points[i].alpha();
    b += w[i] * points[i].beta();
  }
  return {a, b};
}

struct Evaluation {
  std::vector<TangentVector> logs;
  TangentVector gradient;
  double objective;
  double norm;
};

Evaluation evaluate(const BetaPoint& at, std::span<const BetaPoint> points,
                    const std::vector<double>& w, const ShootingOptions& shooting,
                    const std::vector<TangentVector>* previous, const TangentVector* step) {
  Evaluation ev{{}, {at, 0.0, 0.0}, 0.0, 0.0};
  ev.logs.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (w[i] == 0.0) {
      ev.logs.emplace_back(at, 0.0, 0.0);
      continue;
    }
    std::optional<std::array<double, 2>> guess;
    if (previous) {
      // First-order transport of the old log vector to the new base.
      const auto& old = (*previous)[i];
      guess = std::array<double, 2>{old.d_alpha - step->d_alpha, old.d_beta - step->d_beta};
    }
    const auto v = log_map(at, points[i], shooting, guess);
    ev.logs.push_back(v);
    ev.gradient.d_alpha += w[i] * v.d_alpha;
    ev.gradient.d_beta += w[i] * v.d_beta;
    ev.objective += 0.5 * w[i] * fisher_inner(v, v);
  }
  ev.norm = fisher_norm(ev.gradient);
  return ev;
}

}  // namespace

KarcherResult karcher_flow(std::span<const BetaPoint> points, std::span<const double> weights,
                           const KarcherOptions& options) {
  if (!(options.tol >= 1e-10 && options.tol <= 1e-3)) {
    throw DomainError("frechet_mean: tol must lie in [1e-10, 1e-3]");
  }
  const auto w = checked_weights(points, weights);

  if (std::all_of(points.begin(), points.end(), [&](const BetaPoint& p) { return p == points[0]; })) {
    return {points[0], {points[0], 0.0, 0.0}, 0.0, 0.0, 0};
  }

  BetaPoint mean = options.initial.value_or(euclidean_mean(points, w));
  Evaluation ev = evaluate(mean, points, w, options.shooting, nullptr, nullptr);
  double tau = 1.0;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    if (ev.norm <= options.tol) return {mean, ev.gradient, ev.norm, ev.objective, it};
    for (;;) {
      const TangentVector step = ev.gradient.scaled(tau);
      std::optional<Evaluation> next;
      try {
        const BetaPoint candidate = geodesic_endpoint(step, options.shooting.integrator).base;
        next = evaluate(candidate, points, w, options.shooting, &ev.logs, &step);
      } catch (const NumericalError&) {
        // Overshot into a region the shooting cannot handle; treat as an increase.
      }
      // Near the optimum the objective change drops below rounding, so a
      // smaller gradient also counts as progress.
      if (next && (next->objective < ev.objective || next->norm < ev.norm)) {
        mean = next->gradient.base;
        ev = std::move(*next);
        tau = std::min(1.0, 2.0 * tau);
        break;
      }
      tau *= 0.5;
      if (tau < 1e-12) {
        throw ConvergenceError("frechet_mean: step size collapsed at gradient norm " +
                               std::to_string(ev.norm));
      }
    }
  }
  if (ev.norm <= options.tol) return {mean, ev.gradient, ev.norm, ev.objective, options.max_iterations};
  throw ConvergenceError("frechet_mean: no convergence in " +
                         std::to_string(options.max_iterations) + " iterations (gradient norm " +
                         std::to_string(ev.norm) + ")");
}

BetaPoint frechet_mean(std::span<const BetaPoint> points, std::span<const double> weights,
                       double tol) {
  KarcherOptions options;
  options.tol = tol;
  return karcher_flow(points, weights, options).mean;
}

ProductPoint product_frechet_mean(std::span<const ProductPoint> points, double tol) {
  if (points.empty()) throw DomainError("product_frechet_mean: empty point set");
  const std::size_t n = points[0].size();
  for (const auto& p : points) {
    if (p.size() != n) throw DomainError("product_frechet_mean: mixed product lengths");
  }
  std::vector<BetaPoint> means;
  std::vector<BetaPoint> slice;
  for (std::size_t k = 0; k < n; ++k) {
    slice.clear();
    for (const auto& p : points) slice.push_back(p[k]);
    means.push_back(frechet_mean(slice, {}, tol));
  }
  return ProductPoint(std::move(means));
}

}  // namespace betageo
