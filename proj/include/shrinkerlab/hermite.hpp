#pragma once

#include <vector>

namespace shrinkerlab {

/// Quadrature rule for integrals of the form \int f(y) e^{-y^2/4} dy over the
/// real line.  Nodes/weights come from the Golub-Welsch construction for the
/// e^{-x^2} Hermite weight, rescaled by y = 2x.
struct GaussHermiteRule {
  std::vector<double> nodes;    // y_q
  std::vector<double> weights;  // includes the e^{-y^2/4} factor
};

GaussHermiteRule gauss_hermite_rule(int q);

/// Hermite eigenfunctions of the axis drift operator D = d^2/dy^2 - (y/2) d/dy,
/// D h_m = -(m/2) h_m, orthonormal in the e^{-y^2/4}-weighted L^2 inner
/// product.  h_m is a degree-m polynomial; values are generated by the stable
/// normalized three-term recurrence.
///
/// hermite_values(M, y) returns h_0(y) ... h_M(y).
std::vector<double> hermite_values(int max_degree, double y);

/// d/dy h_m = sqrt(m/2) h_{m-1}; exposed for coefficient-space differentiation.
double hermite_derivative_factor(int m);

}  // namespace shrinkerlab
