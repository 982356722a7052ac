#include "betageo/canonical.hpp"

#include <Eigen/LU>
#include <cmath>
#include <string>

#include "betageo/errors.hpp"

namespace betageo {
namespace {

using Real = long double;
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxMoments / 2 + 1,
                             kMaxMoments / 2 + 1>;
// c_0, c_1, ..., c_m
using Moments = std::vector<Real>;

template <class Entry>
Real det(int size, Entry entry) {
  if (size <= 0) return 1.0L;
  Matrix m(size, size);
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) m(i, j) = entry(i + j);
  }
  return m.partialPivLu().determinant();
}

Real lower_det(const Moments& c, int m) {
  if (m < 0) return 1.0L;
  const int k = m / 2;
  if (m % 2 == 0) return det(k + 1, [&](int s) { return c[s]; });
  return det(k + 1, [&](int s) { return c[s + 1]; });
}

Real upper_det(const Moments& c, int m) {
  if (m <= 0) return 1.0L;
  const int k = m / 2;
  if (m % 2 == 0) return det(k, [&](int s) { return c[s + 1] - c[s + 2]; });
  return det(k + 1, [&](int s) { return c[s] - c[s + 1]; });
}

// Bounds for c_n given c_0..c_{n-1}. Both determinants are affine in the
// corner entry c_n, with slopes +H_{n-2} (lower) and -H_{n-2} (upper).
std::pair<Real, Real> next_bounds(Moments& c) {
  const int n = static_cast<int>(c.size());
  c.push_back(0.0L);
  const Real lo = -lower_det(c, n) / lower_det(c, n - 2);
  const Real hi = upper_det(c, n) / upper_det(c, n - 2);
  c.pop_back();
  return {lo, hi};
}

Moments with_c0(const std::vector<double>& values) {
  Moments c{1.0L};
  c.insert(c.end(), values.begin(), values.end());
  return c;
}

// Canonical moments of an arbitrary candidate sequence, rejecting anything
// on or outside the boundary of the moment space.
std::vector<double> canonical_or_throw(const std::vector<double>& values) {
  std::vector<double> p;
  p.reserve(values.size());
  Moments c{1.0L};
  for (std::size_t k = 1; k <= values.size(); ++k) {
    const auto [lo, hi] = next_bounds(c);
    const Real gap = hi - lo;
    if (!(gap > kHankelEpsilon)) {
      throw MomentSpaceError("moment sequence is degenerate before c_" + std::to_string(k) +
                             " (gap " + std::to_string(static_cast<double>(gap)) + ")");
    }
    const auto pk = static_cast<double>((values[k - 1] - lo) / gap);
    if (!(pk > kHankelEpsilon && pk < 1.0 - kHankelEpsilon)) {
      throw MomentSpaceError("c_" + std::to_string(k) + " = " + std::to_string(values[k - 1]) +
                             " is not inside its moment bounds");
    }
    p.push_back(pk);
    c.push_back(values[k - 1]);
  }
  return p;
}

}  // namespace

MomentSequence::MomentSequence(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() > kMaxMoments) {
    throw DomainError("MomentSequence: at most " + std::to_string(kMaxMoments) + " moments");
  }
  for (double v : values_) {
    if (!(v > 0.0 && v < 1.0)) throw MomentSpaceError("MomentSequence: moments must lie in (0, 1)");
  }
  canonical_or_throw(values_);
}

MomentSequence MomentSequence::prefix(std::size_t k) const {
  if (k > size()) throw DomainError("MomentSequence::prefix: longer than the sequence");
  return {std::vector<double>(values_.begin(), values_.begin() + static_cast<long>(k)),
          Unchecked{}};
}

CanonicalSequence::CanonicalSequence(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() > kMaxMoments) {
    throw DomainError("CanonicalSequence: at most " + std::to_string(kMaxMoments) + " terms");
  }
  for (double v : values_) {
    if (!(v > 0.0 && v < 1.0)) throw DomainError("CanonicalSequence: terms must lie in (0, 1)");
  }
}

HankelPair hankel(const MomentSequence& c, int k) {
  if (k < -1 || k > static_cast<int>(c.size())) {
    throw DomainError("hankel: order " + std::to_string(k) + " out of range for " +
                      std::to_string(c.size()) + " moments");
  }
  const Moments m = with_c0(c.values());
  return {k, static_cast<double>(lower_det(m, k)), static_cast<double>(upper_det(m, k))};
}

std::pair<double, double> moment_bounds(const MomentSequence& prefix) {
  if (prefix.size() >= kMaxMoments) throw DomainError("moment_bounds: prefix too long");
  Moments c = with_c0(prefix.values());
  const auto [lo, hi] = next_bounds(c);
  return {static_cast<double>(lo), static_cast<double>(hi)};
}

CanonicalSequence to_canonical(const MomentSequence& c) {
  return CanonicalSequence(canonical_or_throw(c.values()));
}

MomentSequence from_canonical(const CanonicalSequence& p) {
  std::vector<double> values;
  values.reserve(p.size());
  Moments c{1.0L};
  for (std::size_t k = 1; k <= p.size(); ++k) {
    const double pk = p.p(k);
    if (!(pk > kHankelEpsilon && pk < 1.0 - kHankelEpsilon)) {
      throw MomentSpaceError("from_canonical: p_" + std::to_string(k) + " too close to 0 or 1");
    }
    const auto [lo, hi] = next_bounds(c);
    if (!(hi - lo > kHankelEpsilon)) {
      throw MomentSpaceError("from_canonical: prefix before c_" + std::to_string(k) +
                             " is numerically degenerate");
    }
    const auto ck = static_cast<double>(lo + pk * (hi - lo));
    values.push_back(ck);
    c.push_back(ck);
  }
  return {std::move(values), MomentSequence::Unchecked{}};
}

double jacobian_det_formula(const CanonicalSequence& p) {
  const std::size_t n = p.size();
  double jac = 1.0;
  for (std::size_t k = 1; k < n; ++k) jac *= std::pow(p.p(k) * p.q(k), static_cast<double>(n - k));
  return jac;
}

MomentSequence moments_from_samples(std::span<const double> samples, double a, double b,
                                    std::size_t n) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("moments_from_samples: need a finite interval a < b");
  }
  if (n < 1 || n > kMaxMoments) throw DomainError("moments_from_samples: n out of range");
  if (samples.empty()) throw DomainError("moments_from_samples: no samples");
  std::vector<Real> sums(n, 0.0L);
  for (double x : samples) {
    if (!(x >= a && x <= b)) throw DomainError("moments_from_samples: sample outside [a, b]");
    const Real y = (static_cast<Real>(x) - a) / (static_cast<Real>(b) - a);
    Real power = 1.0L;
    for (std::size_t k = 0; k < n; ++k) {
      power *= y;
      sums[k] += power;
    }
  }
  std::vector<double> values;
  for (Real s : sums) values.push_back(static_cast<double>(s / samples.size()));
  return MomentSequence(std::move(values));
}

}  // namespace betageo
