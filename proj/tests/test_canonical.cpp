#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <random>

#include "betageo/canonical.hpp"
#include "betageo/errors.hpp"
#include "oracles.hpp"

using namespace betageo;

namespace {

// 50 digits: cofactor expansion of these matrices cancels heavily.
using Wide = boost::multiprecision::cpp_bin_float_50;
using Grid = std::vector<std::vector<Wide>>;

// c_0 = 1 followed by the sequence.
std::vector<Wide> full(const MomentSequence& c) {
  std::vector<Wide> m{1};
  for (double v : c.values()) m.emplace_back(v);
  return m;
}

// Hankel matrices written out entry by entry, for the cofactor oracle.
double oracle_lower(const std::vector<Wide>& c, int n) {
  if (n < 0) return 1.0;
  const int k = n / 2, shift = n % 2;
  Grid m(k + 1, std::vector<Wide>(k + 1));
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) m[i][j] = c[i + j + shift];
  return static_cast<double>(oracle::cofactor_det(m));
}

double oracle_upper(const std::vector<Wide>& c, int n) {
  if (n <= 0) return 1.0;
  const int size = n % 2 == 0 ? n / 2 : n / 2 + 1, shift = n % 2 == 0 ? 1 : 0;
  Grid m(size, std::vector<Wide>(size));
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) m[i][j] = c[i + j + shift] - c[i + j + shift + 1];
  return static_cast<double>(oracle::cofactor_det(m));
}

// Moments of the beta density proportional to x^(a-1) (1-x)^(b-1).
MomentSequence beta_moments(double a, double b, std::size_t n) {
  std::vector<double> c;
  long double m = 1.0L;
  for (std::size_t k = 0; k < n; ++k) {
    m *= (a + k) / static_cast<long double>(a + b + k);
    c.push_back(static_cast<double>(m));
  }
  return MomentSequence(c);
}

// Known canonical moments of the same beta density.
double beta_canonical(double a, double b, std::size_t k) {
  const double j = static_cast<double>((k + 1) / 2);
  return k % 2 == 1 ? (a + j - 1) / (a + b + 2 * j - 2) : j / (a + b + 2 * j - 1);
}

MomentSequence discrete_moments(const std::vector<double>& x, const std::vector<double>& w,
                                std::size_t n) {
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < n; ++k) c[k] += w[i] * std::pow(x[i], k + 1.0);
  return MomentSequence(c);
}

CanonicalSequence random_canonical(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.1, 0.9);
  std::vector<double> p(n);
  for (auto& v : p) v = u(rng);
  return CanonicalSequence(p);
}

}  // namespace

TEST(Hankel, LowOrders) {
  const MomentSequence c({0.3, 0.2});
  const auto minus = hankel(c, -1), zero = hankel(c, 0), one = hankel(c, 1);
  EXPECT_EQ(minus.lower, 1.0);
  EXPECT_EQ(minus.upper, 1.0);
  EXPECT_EQ(zero.lower, 1.0);
  EXPECT_EQ(zero.upper, 1.0);
  EXPECT_DOUBLE_EQ(one.lower, 0.3);
  EXPECT_DOUBLE_EQ(one.upper, 0.7);
  EXPECT_EQ(one.order, 1);
}

TEST(Hankel, UniformSecondOrder) {
  const MomentSequence c({1.0 / 2, 1.0 / 3});
  const auto h = hankel(c, 2);
  EXPECT_NEAR(h.lower, 1.0 / 12, 1e-16);
  EXPECT_NEAR(h.upper, 1.0 / 2 - 1.0 / 3, 1e-16);
}

TEST(Hankel, MatchesCofactorExpansion) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto c = from_canonical(random_canonical(rng, 12));
    const auto m = full(c);
    for (int k = 0; k <= 12; ++k) {
      const auto h = hankel(c, k);
      const auto lo = oracle_lower(m, k), up = oracle_upper(m, k);
      EXPECT_NEAR(h.lower, lo, 1e-9 * std::abs(lo)) << "order " << k;
      EXPECT_NEAR(h.upper, up, 1e-9 * std::abs(up)) << "order " << k;
    }
  }
}

TEST(Hankel, DeterminantRelation) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 7;
    const auto c = from_canonical(random_canonical(rng, n));
    for (int k = 0; k < static_cast<int>(n); ++k) {
      const auto h = hankel(c, k), below = hankel(c, k - 1), above = hankel(c, k + 1);
      const double lhs = h.lower * h.upper;
      const double rhs = below.lower * above.upper + below.upper * above.lower;
      EXPECT_NEAR(lhs, rhs, 1e-10 * lhs) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Hankel, RejectsOrderOutOfRange) {
  const MomentSequence c({0.5});
  EXPECT_THROW(hankel(c, 2), DomainError);
  EXPECT_THROW(hankel(c, -2), DomainError);
}

TEST(MomentBounds, FirstMoment) {
  const auto [lo, hi] = moment_bounds(MomentSequence());
  EXPECT_EQ(lo, 0.0);
  EXPECT_EQ(hi, 1.0);
}

TEST(MomentBounds, SecondMomentBetweenParabolaAndDiagonal) {
  const auto [lo, hi] = moment_bounds(MomentSequence({0.5}));
  EXPECT_DOUBLE_EQ(lo, 0.25);
  EXPECT_DOUBLE_EQ(hi, 0.5);
}

TEST(MomentBounds, MatchAffineRootsOfHankelDeterminants) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + t % 10;
    const auto prefix = from_canonical(random_canonical(rng, n - 1));
    auto m = full(prefix);
    m.emplace_back(0);
    const double lo0 = oracle_lower(m, n), up0 = oracle_upper(m, n);
    m.back() = 1;
    const double lo1 = oracle_lower(m, n), up1 = oracle_upper(m, n);
    const double want_lo = -lo0 / (lo1 - lo0);
    const double want_hi = -up0 / (up1 - up0);
    const auto [lo, hi] = moment_bounds(prefix);
    const double gap = hi - lo;
    EXPECT_NEAR(lo, want_lo, 1e-9 * gap);
    EXPECT_NEAR(hi, want_hi, 1e-9 * gap);
  }
}

TEST(MomentBounds, DistancesToBoundsAreHankelRatios) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + t % 8;
    const auto c = from_canonical(random_canonical(rng, n));
    const auto [lo, hi] = moment_bounds(c.prefix(n - 1));
    const int k = static_cast<int>(n);
    const auto h = hankel(c, k), h2 = hankel(c, k - 2);
    EXPECT_NEAR(c.c(n) - lo, h.lower / h2.lower, 1e-9 * (hi - lo));
    EXPECT_NEAR(hi - c.c(n), h.upper / h2.upper, 1e-9 * (hi - lo));
  }
}

TEST(MomentBounds, GapClosesNearDirac) {
  double previous = 1.0;
  for (double delta : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const double x = 0.3;
    const auto [lo, hi] = moment_bounds(MomentSequence({x, x * x + delta}));
    EXPECT_LT(hi - lo, previous);
    previous = hi - lo;
  }
  EXPECT_LT(previous, 1e-7);
}

TEST(MomentSequence, RejectsSequencesOffTheInterior) {
  EXPECT_THROW(MomentSequence({0.5, 0.2}), MomentSpaceError);  // below c_1^2
  EXPECT_THROW(MomentSequence({0.5, 0.6}), MomentSpaceError);  // above c_1
  EXPECT_THROW(MomentSequence({0.5, 0.25}), MomentSpaceError);
  EXPECT_THROW(MomentSequence({1.0}), MomentSpaceError);
  EXPECT_THROW(MomentSequence(std::vector<double>(13, 0.5)), DomainError);
  EXPECT_THROW(CanonicalSequence({0.5, 1.0}), DomainError);
}

TEST(ToCanonical, UniformPair) {
  const auto p = to_canonical(MomentSequence({1.0 / 2, 1.0 / 3}));
  EXPECT_NEAR(p.p(1), 0.5, 1e-15);
  EXPECT_NEAR(p.p(2), 1.0 / 3, 1e-15);
}

TEST(ToCanonical, BetaDensitiesMatchClosedForm) {
  for (auto [a, b] : {std::pair{1.0, 1.0}, {0.5, 0.5}, {2.0, 5.0}, {3.5, 1.2}}) {
    const auto p = to_canonical(beta_moments(a, b, 10));
    for (std::size_t k = 1; k <= 10; ++k) {
      EXPECT_NEAR(p.p(k), beta_canonical(a, b, k), 1e-8) << a << "," << b << " k=" << k;
    }
  }
}

TEST(ToCanonical, ArcsineIsAllOneHalf) {
  const auto p = to_canonical(beta_moments(0.5, 0.5, 12));
  for (double v : p.values()) EXPECT_NEAR(v, 0.5, 1e-8);
}

TEST(ToCanonical, SymmetricMeasuresHaveOddTermsOneHalf) {
  const auto sym_beta = to_canonical(beta_moments(2.0, 2.0, 8));
  const auto sym_points = to_canonical(
      discrete_moments({0.05, 0.3, 0.5, 0.7, 0.95}, {0.1, 0.25, 0.3, 0.25, 0.1}, 8));
  for (const auto& p : {sym_beta, sym_points}) {
    for (std::size_t k = 1; k <= 8; k += 2) EXPECT_NEAR(p.p(k), 0.5, 1e-10) << "k=" << k;
  }
  // Even terms are free: the uniform measure is symmetric with p_2 = 1/3.
  EXPECT_NEAR(sym_beta.p(2), 1.0 / 5, 1e-12);

  const auto skew = to_canonical(
      discrete_moments({0.05, 0.3, 0.5, 0.7, 0.95}, {0.1, 0.25, 0.3, 0.2, 0.15}, 8));
  bool some_odd_off = false;
  for (std::size_t k = 1; k <= 8; k += 2) some_odd_off |= std::abs(skew.p(k) - 0.5) > 1e-3;
  EXPECT_TRUE(some_odd_off);
}

TEST(ToCanonical, InvariantUnderAffineMaps) {
  std::mt19937_64 rng(5);
  std::gamma_distribution<double> g(2.0, 1.0);
  std::vector<double> unit, stretched;
  for (int i = 0; i < 2000; ++i) {
    const double x = g(rng), y = g(rng);
    unit.push_back(x / (x + y));
    stretched.push_back(-3.0 + 7.5 * unit.back());
  }
  const auto p = to_canonical(moments_from_samples(unit, 0.0, 1.0, 6));
  const auto q = to_canonical(moments_from_samples(stretched, -3.0, 4.5, 6));
  for (std::size_t k = 1; k <= 6; ++k) EXPECT_NEAR(p.p(k), q.p(k), 1e-9);
}

TEST(FromCanonical, UniformPair) {
  const auto c = from_canonical(CanonicalSequence({0.5, 1.0 / 3}));
  EXPECT_NEAR(c.c(1), 0.5, 1e-16);
  EXPECT_NEAR(c.c(2), 1.0 / 3, 1e-16);
}

TEST(FromCanonical, AllOneHalfGivesCentralBinomialMoments) {
  const auto c = from_canonical(CanonicalSequence(std::vector<double>(12, 0.5)));
  // Arcsine moments: c_k = prod_{j<k} (j + 1/2) / (j + 1).
  double want = 1.0;
  for (std::size_t k = 1; k <= 12; ++k) {
    want *= (k - 0.5) / k;
    EXPECT_NEAR(c.c(k), want, 1e-14);
  }
}

TEST(FromCanonical, RoundTrips) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 8;
    const auto p = random_canonical(rng, n);
    const auto c = from_canonical(p);
    const auto back = to_canonical(c);
    for (std::size_t k = 1; k <= n; ++k) EXPECT_NEAR(back.p(k), p.p(k), 1e-10);
    const auto again = from_canonical(back);
    for (std::size_t k = 1; k <= n; ++k) EXPECT_NEAR(again.c(k), c.c(k), 1e-10 * c.c(k));
  }
}

TEST(FromCanonical, DistanceToLowerBoundIsProduct) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + t % 5;
    const auto p = random_canonical(rng, n);
    const auto c = from_canonical(p);
    double prod = 1.0, gap = 1.0;
    for (std::size_t k = 1; k <= n; ++k) prod *= p.q(k - 1) * p.p(k);
    for (std::size_t k = 1; k < n; ++k) gap *= p.p(k) * p.q(k);
    const auto [lo, hi] = moment_bounds(c.prefix(n - 1));
    EXPECT_NEAR(c.c(n) - lo, prod, 1e-12);
    EXPECT_NEAR(hi - lo, gap, 1e-12);
  }
}

TEST(FromCanonical, ResultIsStrictlyInterior) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> p(10);
    for (auto& v : p) v = u(rng);
    const auto c = from_canonical(CanonicalSequence(p));
    for (int k = 0; k <= 10; ++k) {
      EXPECT_GT(hankel(c, k).lower, 0.0);
      EXPECT_GT(hankel(c, k).upper, 0.0);
    }
  }
}

TEST(FromCanonical, RejectsDegenerateTerms) {
  EXPECT_THROW(from_canonical(CanonicalSequence({0.5, 1e-14})), MomentSpaceError);
  EXPECT_THROW(from_canonical(CanonicalSequence({1.0 - 1e-14, 0.5})), MomentSpaceError);
  std::vector<double> tiny(12, 1e-3);
  EXPECT_THROW(from_canonical(CanonicalSequence(tiny)), MomentSpaceError);
}

TEST(Jacobian, SmallCases) {
  EXPECT_EQ(jacobian_det_formula(CanonicalSequence({0.3})), 1.0);
  EXPECT_DOUBLE_EQ(jacobian_det_formula(CanonicalSequence({0.5, 0.5, 0.5})), 1.0 / 64);
}

TEST(Jacobian, MatchesFiniteDifferences) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + t % 5;
    const auto p = random_canonical(rng, n);
    Grid jac(n, std::vector<Wide>(n));
    const double h = 1e-6;
    for (std::size_t j = 0; j < n; ++j) {
      auto up = p.values(), down = p.values();
      up[j] += h;
      down[j] -= h;
      const auto cu = from_canonical(CanonicalSequence(up));
      const auto cd = from_canonical(CanonicalSequence(down));
      for (std::size_t i = 0; i < n; ++i) jac[i][j] = (cu.c(i + 1) - cd.c(i + 1)) / (2 * h);
    }
    const double want = std::abs(static_cast<double>(oracle::cofactor_det(jac)));
    EXPECT_NEAR(jacobian_det_formula(p), want, 1e-4 * want) << "n=" << n;
  }
}

TEST(MomentsFromSamples, DiracIsOnTheBoundary) {
  const std::vector<double> same(50, 0.37);
  EXPECT_THROW(moments_from_samples(same, 0.0, 1.0, 2), MomentSpaceError);
  EXPECT_NO_THROW(moments_from_samples(same, 0.0, 1.0, 1));
}

TEST(MomentsFromSamples, TooFewDistinctValues) {
  const std::vector<double> three{0.1, 0.5, 0.9, 0.1, 0.5, 0.9};
  EXPECT_NO_THROW(moments_from_samples(three, 0.0, 1.0, 4));
  EXPECT_THROW(moments_from_samples(three, 0.0, 1.0, 6), MomentSpaceError);
}

TEST(MomentsFromSamples, LargeUniformSample) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t count = 100000;
  std::vector<double> xs(count);
  for (auto& x : xs) x = u(rng);
  const auto c = moments_from_samples(xs, 0.0, 1.0, 2);
  const double sd1 = std::sqrt((1.0 / 3 - 1.0 / 4) / count);
  const double sd2 = std::sqrt((1.0 / 5 - 1.0 / 9) / count);
  EXPECT_NEAR(c.c(1), 0.5, 3 * sd1);
  EXPECT_NEAR(c.c(2), 1.0 / 3, 3 * sd2);
}

TEST(MomentsFromSamples, RejectsBadInput) {
  const std::vector<double> xs{0.2, 0.4, 1.2};
  EXPECT_THROW(moments_from_samples(xs, 0.0, 1.0, 2), DomainError);
  EXPECT_THROW(moments_from_samples(xs, 2.0, 1.0, 2), DomainError);
  EXPECT_THROW(moments_from_samples(xs, 0.0, 2.0, 0), DomainError);
  EXPECT_THROW(moments_from_samples({}, 0.0, 2.0, 1), DomainError);
}
