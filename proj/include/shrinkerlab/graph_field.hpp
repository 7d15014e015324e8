#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shrinkerlab/discretization.hpp"

namespace shrinkerlab {

/// Scalar field over the cylinder parameter domain with dual representation:
/// spectral coefficients are the source of truth, nodal values are derived.
/// The coefficient layout is row-major (theta basis index, Hermite degree);
/// this is also the snapshot-file mode order.
struct GraphField {
  DiscPtr disc;
  std::vector<double> coeff;

  GraphField() = default;
  explicit GraphField(DiscPtr d) : disc(std::move(d)), coeff(disc->n_modes(), 0.0) {}

  double& at(int j, int m, int parity = 0) { return coeff[disc->mode_index(disc->theta_basis_index(j, parity), m)]; }
  double at(int j, int m, int parity = 0) const { return coeff[disc->mode_index(disc->theta_basis_index(j, parity), m)]; }

  /// Gaussian L2 norm via Parseval.
  double l2_norm() const;

  GraphField& operator+=(const GraphField& o);
  GraphField& operator*=(double s);

  /// Coefficients of the theta-derivative (per unit angle, not arclength).
  std::vector<double> dtheta_coeff(const std::vector<double>& c) const;
  /// Coefficients of the y-derivative.
  std::vector<double> dy_coeff(const std::vector<double>& c) const;

  /// Nodal values of the (dtheta, dy)-derivative on the quadrature grid.
  std::vector<double> nodal(int dtheta = 0, int dy = 0) const;

  /// Nodal values on an arbitrary tensor grid.
  std::vector<double> nodal_at(const std::vector<double>& thetas,
                               const std::vector<double>& ys,
                               int dtheta = 0, int dy = 0) const;
};

/// u, derivatives up to second order, on the quadrature grid (node-major
/// layout matching Discretization::node_index).
struct NodalPack {
  std::vector<double> u, ut, uy, utt, uty, uyy;
};

NodalPack eval_pack(const GraphField& f);

/// Zeroes pack entries at nodes with |y| > L: the perturbation is supported
/// inside the truncation window; beyond it the surface is the exact cylinder.
void window_pack(const Discretization& d, const std::vector<double>& ys, NodalPack& p);

/// Projects nodal values on the quadrature grid back to coefficients.
GraphField field_from_nodal(const DiscPtr& disc, const std::vector<double>& values);

/// Projects an arbitrary function of (theta, y).
GraphField field_from_function(const DiscPtr& disc,
                               const std::function<double(double, double)>& f);

/// Unit-norm basis mode (j, m); parity selects the cos/sin branch for j>0.
GraphField unit_mode(const DiscPtr& disc, int j, int m, int parity = 0);

/// Unit-norm basis mode multiplied by the truncation taper and renormalized.
/// This is the standard perturbation shape: identical to the pure mode for
/// |y| <= 0.8 L and Dirichlet-zero beyond L.
GraphField tapered_mode(const DiscPtr& disc, int j, int m, int parity = 0);

}  // namespace shrinkerlab
