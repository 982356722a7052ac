#pragma once

#include <array>

namespace betageo {

/// Order of a polygamma function: 0 is digamma, 1 trigamma, and so on.
/// Only the four orders used by the beta geometry are representable.
class PolyGammaOrder {
 public:
  constexpr explicit PolyGammaOrder(int order) : order_(checked(order)) {}
  constexpr int value() const { return order_; }

 private:
  static constexpr int checked(int order) {
    if (order < 0 || order > 3) throw_bad_order(order);
    return order;
  }
  [[noreturn]] static void throw_bad_order(int order);
  int order_;
};

/// psi^(order)(x) for x > 0. Throws DomainError for x <= 0 or non-finite x.
double polygamma(PolyGammaOrder order, double x);

double digamma(double x);
double trigamma(double x);
double tetragamma(double x);
double pentagamma(double x);

/// psi, psi', psi'', psi''' at x, sharing one recurrence pass.
std::array<double, 4> polygamma_all(double x);

/// psi' and psi'' at x. This pair drives the metric and the geodesic flow.
struct TriTetra {
  double tri;
  double tetra;
};
TriTetra trigamma_tetragamma(double x);

}  // namespace betageo
