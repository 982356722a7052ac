#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace betageo {

/// Longest supported sequence; Hankel matrices beyond this are too
/// ill-conditioned for double-precision moments.
inline constexpr std::size_t kMaxMoments = 12;

/// Sequences whose prefix gap c_k^+ - c_k^- or canonical moment p_k (or q_k)
/// falls to this level are treated as lying on the moment-space boundary.
inline constexpr double kHankelEpsilon = 1e-12;

class CanonicalSequence;

/// Moments (c_1, ..., c_n) of a probability measure on [0, 1], with c_0 = 1
/// implied. Construction checks that the sequence is strictly inside the
/// moment space and throws MomentSpaceError otherwise.
class MomentSequence {
 public:
  MomentSequence() = default;
  explicit MomentSequence(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  /// c_k for 0 <= k <= size().
  double c(std::size_t k) const { return k == 0 ? 1.0 : values_.at(k - 1); }
  const std::vector<double>& values() const { return values_; }
  /// The first k moments.
  MomentSequence prefix(std::size_t k) const;

  friend bool operator==(const MomentSequence&, const MomentSequence&) = default;

 private:
  struct Unchecked {};
  MomentSequence(std::vector<double> values, Unchecked) : values_(std::move(values)) {}
  friend MomentSequence from_canonical(const CanonicalSequence&);

  std::vector<double> values_;
};

/// Canonical moments (p_1, ..., p_n), each strictly inside (0, 1).
class CanonicalSequence {
 public:
  CanonicalSequence() = default;
  explicit CanonicalSequence(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  /// p_k for 1 <= k <= size().
  double p(std::size_t k) const { return values_.at(k - 1); }
  /// q_k = 1 - p_k, with q_0 = 1.
  double q(std::size_t k) const { return k == 0 ? 1.0 : 1.0 - p(k); }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const CanonicalSequence&, const CanonicalSequence&) = default;

 private:
  std::vector<double> values_;
};

struct HankelPair {
  int order;
  double lower;
  double upper;
};

/// Lower and upper Hankel determinants of order k, for -1 <= k <= c.size().
/// Orders -1 and 0 follow the usual conventions (H_{-1} = 1, lower H_0 = c_0,
/// upper H_0 = 1).
HankelPair hankel(const MomentSequence& c, int k);

/// Range (c_n^-, c_n^+) of the next moment given the prefix (c_1, ..., c_{n-1}).
/// Each bound is the root of the order-n Hankel determinant, which is affine
/// in its corner entry c_n.
std::pair<double, double> moment_bounds(const MomentSequence& prefix);

CanonicalSequence to_canonical(const MomentSequence& c);

/// Inverse of to_canonical: c_k = c_k^- + p_k (c_k^+ - c_k^-), one index at a
/// time. Throws MomentSpaceError if a p_k sits too close to 0 or 1.
MomentSequence from_canonical(const CanonicalSequence& p);

/// |d(c_1..c_n) / d(p_1..p_n)| = prod_{k=1}^{n-1} (p_k q_k)^(n-k).
double jacobian_det_formula(const CanonicalSequence& p);

/// Empirical moments of the samples after mapping [a, b] onto [0, 1].
MomentSequence moments_from_samples(std::span<const double> samples, double a, double b,
                                    std::size_t n);

}  // namespace betageo
