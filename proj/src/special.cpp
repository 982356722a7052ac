#include "betageo/special.hpp"

#include <cmath>
#include <string>

#include "betageo/errors.hpp"

namespace betageo {
namespace {

// Arguments below this are shifted upward with the recurrence before the
// asymptotic expansion is applied. With ten Bernoulli terms the truncation
// error at the threshold is below 1e-16 relative for every order used here.
constexpr double kShiftThreshold = 12.0;
constexpr int kTerms = 10;

// B_2, B_4, ..., B_20.
constexpr std::array<double, kTerms> kBernoulli = {
    1.0 / 6.0,      -1.0 / 30.0,     1.0 / 42.0,        -1.0 / 30.0,
    5.0 / 66.0,     -691.0 / 2730.0, 7.0 / 6.0,         -3617.0 / 510.0,
    43867.0 / 798.0, -174611.0 / 330.0};

// Coefficients B_2k (2k+m-1)! / (2k)! of the expansion of psi^(m), m >= 1;
// for m = 0 the coefficient is B_2k / (2k).
constexpr std::array<double, kTerms> series_coefficients(int m) {
  std::array<double, kTerms> c{};
  for (int k = 1; k <= kTerms; ++k) {
    double factor = 1.0;
    if (m == 0) {
      factor = 1.0 / (2.0 * k);
    } else {
      for (int j = 2 * k + 1; j <= 2 * k + m - 1; ++j) factor *= j;
    }
    c[k - 1] = kBernoulli[k - 1] * factor;
  }
  return c;
}

constexpr std::array<std::array<double, kTerms>, 4> kCoefficients = {
    series_coefficients(0), series_coefficients(1), series_coefficients(2),
    series_coefficients(3)};

double horner(const std::array<double, kTerms>& c, double y) {
  double s = 0.0;
  for (int k = kTerms - 1; k >= 0; --k) s = s * y + c[k];
  return s * y;
}

// Asymptotic expansions, valid for x >= kShiftThreshold.
std::array<double, 4> asymptotic(double x) {
  const double inv = 1.0 / x;
  const double y = inv * inv;
  std::array<double, 4> out{};
  out[0] = std::log(x) - 0.5 * inv - horner(kCoefficients[0], y);
  // psi^(m) = (-1)^(m+1) [ (m-1)!/x^m + m!/(2 x^(m+1)) + sum / x^m ]
  double inv_pow = inv;  // 1/x^m
  double fact_m_minus_1 = 1.0;
  for (int m = 1; m <= 3; ++m) {
    const double fact_m = fact_m_minus_1 * m;
    const double body = fact_m_minus_1 + 0.5 * fact_m * inv + horner(kCoefficients[m], y);
    out[m] = (m % 2 == 1 ? 1.0 : -1.0) * body * inv_pow;
    inv_pow *= inv;
    fact_m_minus_1 = fact_m;
  }
  return out;
}

void check_argument(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("polygamma: argument must be positive and finite, got " +
                      std::to_string(x));
  }
}

}  // namespace

void PolyGammaOrder::throw_bad_order(int order) {
  throw DomainError("polygamma: order must be in {0,1,2,3}, got " + std::to_string(order));
}

std::array<double, 4> polygamma_all(double x) {
  check_argument(x);
  if (x >= kShiftThreshold) return asymptotic(x);

  const int shift = static_cast<int>(std::ceil(kShiftThreshold - x));
  std::array<double, 4> out = asymptotic(x + shift);
  // Smallest terms first.
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (int k = shift - 1; k >= 0; --k) {
    const double inv = 1.0 / (x + k);
    const double inv2 = inv * inv;
    s1 += inv;
    s2 += inv2;
    s3 += inv2 * inv;
    s4 += inv2 * inv2;
  }
  out[0] -= s1;
  out[1] += s2;
  out[2] -= 2.0 * s3;
  out[3] += 6.0 * s4;
  return out;
}

TriTetra trigamma_tetragamma(double x) {
  check_argument(x);
  if (x >= kShiftThreshold) {
    const auto a = asymptotic(x);
    return {a[1], a[2]};
  }
  const int shift = static_cast<int>(std::ceil(kShiftThreshold - x));
  const auto a = asymptotic(x + shift);
  double s2 = 0.0, s3 = 0.0;
  for (int k = shift - 1; k >= 0; --k) {
    const double inv = 1.0 / (x + k);
    const double inv2 = inv * inv;
    s2 += inv2;
    s3 += inv2 * inv;
  }
  return {a[1] + s2, a[2] - 2.0 * s3};
}

double polygamma(PolyGammaOrder order, double x) { return polygamma_all(x)[order.value()]; }

double digamma(double x) { return polygamma_all(x)[0]; }
double trigamma(double x) { return trigamma_tetragamma(x).tri; }
double tetragamma(double x) { return trigamma_tetragamma(x).tetra; }
double pentagamma(double x) { return polygamma_all(x)[3]; }

}  // namespace betageo
