#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "shrinkerlab/linalg.hpp"

namespace shrinkerlab {

/// Tensor-product discretization of fields on the cylinder S^1_{sqrt2} x R
/// (the k=1, n=2 nodal instantiation).  theta is resolved by a uniform
/// periodic grid / trigonometric basis, the axis variable y by Hermite
/// eigenfunctions of the drift operator with Gauss quadrature nodes for the
/// e^{-y^2/4} weight.
///
/// Basis functions T_t(theta) h_m(y) have unit norm in the full Gaussian
/// inner product <f,g> = int f g e^{-|x|^2/4} dmu over the cylinder, so
/// coefficient vectors satisfy Parseval against that norm.
///
/// All tables are immutable after construction and shared read-only.
struct Discretization {
  int k = 1, n = 2;
  int n_theta = 0;   // uniform theta nodes
  int M = 0;         // Hermite degree cap
  int Q = 0;         // quadrature nodes in y
  double L = 12.0;   // truncation half-width for perturbations
  double taper_start_frac = 0.8;
  double radius = 0.0;  // sqrt(2k)

  int jmax = 0;  // highest circle frequency carried
  int n_tb = 0;  // number of theta basis functions = 2*jmax + 1

  std::vector<double> theta;     // n_theta
  std::vector<double> y;         // Q quadrature nodes
  std::vector<double> yw;        // quadrature weights incl. e^{-y^2/4}
  std::vector<double> circle_w;  // per-theta measure: radius e^{-r^2/4} dtheta

  // Fields are supported in |y| <= L (Dirichlet-zero perturbation beyond the
  // taper); quadrature nodes outside carry the exact cylinder.  Consumers of
  // nodal data window with this mask: the polynomial evaluation of a
  // truncated Hermite series is meaningless that far out.
  std::vector<std::uint8_t> y_in_window;

  Mat Tval;   // n_tb x n_theta,  T_t(theta_i)
  Mat Tquad;  // n_tb x n_theta,  T_t(theta_i) * circle_w[i]
  Mat Hval;   // Q x (M+1),       h_m(y_q)
  Mat Hquad;  // Q x (M+1),       h_m(y_q) * yw[q]

  std::vector<int> mode_j;       // circle frequency per theta-basis index
  std::vector<int> mode_parity;  // 0 = cos branch (and j=0), 1 = sin branch

  std::size_t n_modes() const { return std::size_t(n_tb) * (M + 1); }
  std::size_t n_nodes() const { return std::size_t(n_theta) * Q; }
  std::size_t mode_index(int tb, int m) const { return std::size_t(tb) * (M + 1) + m; }
  std::size_t node_index(int i, int q) const { return std::size_t(i) * Q + q; }

  /// Index of the theta basis function with circle frequency j; parity 0=cos.
  int theta_basis_index(int j, int parity) const;

  /// L-eigenvalue of basis mode (tb, m):  1 - j^2/(2k)... for k=1: 1 - j^2/2 - m/2.
  double eigenvalue(int tb, int m) const;

  /// Smooth cutoff: 1 for |y| <= taper_start_frac*L, 0 for |y| >= L.
  double taper(double yv) const;

  /// Theta-basis values at arbitrary angles (rows: basis, cols: points).
  Mat theta_basis_matrix(const std::vector<double>& thetas) const;
  /// Hermite values at arbitrary points (rows: points, cols: degree).
  Mat hermite_basis_matrix(const std::vector<double>& ys) const;
};

using DiscPtr = std::shared_ptr<const Discretization>;

/// Builds the tables.  q defaults to 2M+1 so quadrature is exact on products
/// of basis polynomials.
DiscPtr make_discretization(int n_theta, int M, double L = 12.0, int q = -1);

}  // namespace shrinkerlab
