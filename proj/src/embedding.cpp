#include "betageo/embedding.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <string>

#include "betageo/errors.hpp"
#include "betageo/geodesy.hpp"
#include "betageo/metric.hpp"

namespace betageo {

MeanLine::MeanLine(double p) : p_(p), ratio_(1.0 / p - 1.0) {
  if (!(p > 0.0 && p < 1.0) || !(ratio_ > 0.0)) {
    throw DomainError("MeanLine: mean must lie strictly inside (0, 1)");
  }
}

bool MeanLine::contains(const BetaPoint& b) const {
  return std::abs(b.beta() - ratio_ * b.alpha()) <= 4e-16 * b.beta();
}

namespace {

// Derivative of half the squared distance to `target` along the line at
// alpha = e^s, with the log map kept as the warm start for the next call.
class LineSlope {
 public:
  LineSlope(const BetaPoint& target, const MeanLine& line) : target_(target), line_(line) {}

  struct Value {
    double slope;
    double orthogonality;
    double distance;
  };

  Value operator()(double s) {
    const BetaPoint x = line_.at(std::exp(s));
    const TangentVector v = log_map(x, target_, {}, guess_);
    guess_ = std::array<double, 2>{v.d_alpha, v.d_beta};
    const TangentVector along(x, x.alpha(), x.beta());
    const double inner = fisher_inner(v, along);
    return {-inner, inner / fisher_norm(along), fisher_norm(v)};
  }

 private:
  BetaPoint target_;
  MeanLine line_;
  std::optional<std::array<double, 2>> guess_;
};

}  // namespace

Projection project_to_line(const BetaPoint& b, const MeanLine& line,
                           const ProjectionOptions& options) {
  if (!(options.tol >= 1e-10 && options.tol <= 1e-4)) {
    throw DomainError("project_to_line: tol must lie in [1e-10, 1e-4]");
  }
  if (line.contains(b)) return {b, 0.0, 0.0};

  LineSlope slope(b, line);
  const double start = options.start_alpha.value_or(line.p() * (b.alpha() + b.beta()));
  if (!(start > 0.0) || !std::isfinite(start)) throw DomainError("project_to_line: bad start");

  // Walk downhill with doubling steps until the slope changes sign.
  double s0 = std::log(start);
  auto f0 = slope(s0);
  if (std::abs(f0.orthogonality) <= options.tol) return {line.at(start), f0.distance, f0.orthogonality};
  const double dir = f0.slope > 0.0 ? -1.0 : 1.0;
  double step = 0.25;
  double s1 = s0 + dir * step;
  auto f1 = slope(s1);
  int expansions = 0;
  while ((f1.slope > 0.0) == (f0.slope > 0.0)) {
    if (++expansions > 60) throw ConvergenceError("project_to_line: no bracket found");
    s0 = s1;
    f0 = f1;
    step *= 2.0;
    s1 = s0 + dir * step;
    f1 = slope(s1);
  }

  double lo = std::min(s0, s1), hi = std::max(s0, s1);
  double f_lo = s0 < s1 ? f0.slope : f1.slope, f_hi = s0 < s1 ? f1.slope : f0.slope;
  std::uintmax_t max_iter = 100;
  const auto [a, c] = boost::math::tools::toms748_solve(
      [&](double s) { return slope(s).slope; }, lo, hi, f_lo, f_hi,
      [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(x)); },
      max_iter);

  const double s = 0.5 * (a + c);
  const auto at = slope(s);
  if (!(std::abs(at.orthogonality) <= options.tol)) {
    throw ConvergenceError("project_to_line: orthogonality residual " +
                           std::to_string(at.orthogonality) + " above tolerance");
  }
  return {line.at(std::exp(s)), at.distance, at.orthogonality};
}

ProductPoint phi_map(const CanonicalSequence& p) {
  const std::size_t n = p.size();
  if (n == 0) throw DomainError("phi_map: empty canonical sequence");
  std::vector<BetaPoint> components;
  components.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const auto shape = static_cast<double>(n - k + 1);
    components.push_back(project_to_line({shape, shape}, MeanLine(p.p(k))).point);
  }
  return ProductPoint(std::move(components));
}

double product_distance(const ProductPoint& x, const ProductPoint& y) {
  if (x.size() != y.size()) throw DomainError("product_distance: mismatched lengths");
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sum += std::pow(distance(x[k], y[k]), 2);
  return std::sqrt(sum);
}

double rho_distance(const MomentSequence& c1, const MomentSequence& c2) {
  if (c1.size() != c2.size()) throw DomainError("rho_distance: mismatched lengths");
  if (c1 == c2) return 0.0;
  return product_distance(phi_map(to_canonical(c1)), phi_map(to_canonical(c2)));
}

MomentSequence moment_centroid(std::span<const MomentSequence> cs, double tol) {
  if (cs.empty()) throw DomainError("moment_centroid: no sequences");
  std::vector<ProductPoint> images;
  for (const auto& c : cs) {
    if (c.size() != cs[0].size()) throw DomainError("moment_centroid: mismatched lengths");
    images.push_back(phi_map(to_canonical(c)));
  }
  const ProductPoint mean = product_frechet_mean(images, tol);
  std::vector<double> p;
  for (const auto& b : mean.components()) p.push_back(b.mean());
  return from_canonical(CanonicalSequence(std::move(p)));
}

}  // namespace betageo
