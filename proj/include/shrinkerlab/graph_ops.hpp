#pragma once

#include <vector>

#include "shrinkerlab/graph_field.hpp"

namespace shrinkerlab {

/// Sign relating the gradient of the Gaussian area functional to the
/// linearized operator:  M(eps v) = sigma * eps * L v + O(eps^2).
/// Fixed once from the radial family r -> sqrt(pi) r e^{-r^2/4} (whose maximum
/// sits at r = sqrt(2)) and pinned by the linearization tests.
inline constexpr double kSigmaGradVsL = -1.0;

/// Pointwise geometry of the normal graph Sigma_u over the k=1, n=2 cylinder,
/// evaluated on the quadrature grid.  All fields are node-major.
///
///   w    speed factor sqrt(1 + |B^{-1} grad u|^2)
///   nu   relative area element w det B
///   eta  support function <x, n_u>
///   Hu   mean curvature of the graph
///   phi  eta/2 - Hu, the shrinker residual of the graph
///   M    gradient of the Gaussian area functional
///   rhs  w (eta/2 - Hu), the graphical rescaled-flow velocity
struct GraphGeometry {
  std::vector<double> w, nu, eta, Hu, phi, M, rhs;
};

namespace kernels {
/// Hot loop; serial and OpenMP variants produce bitwise-identical output.
void graph_geometry_serial(const Discretization& d, const NodalPack& p, GraphGeometry& out);
void graph_geometry_parallel(const Discretization& d, const NodalPack& p, GraphGeometry& out);
}  // namespace kernels

GraphGeometry graph_geometry(const GraphField& u, Exec mode = default_exec());

/// Mean curvature H_u of the graph, via the divergence-form expression in the
/// offset-map variables (chain-rule expanded).  Throws std::domain_error when
/// the graph reaches the offset singularity inside |y| <= L and
/// std::invalid_argument on non-finite input data.
std::vector<double> graph_mean_curvature(const GraphField& u, Exec mode = default_exec());

/// Gradient M(u) of the Gaussian area functional;  M(0) = 0.
std::vector<double> gradient_M(const GraphField& u, Exec mode = default_exec());

/// Coefficients of the graphical rescaled-flow velocity w (eta/2 - H_u).
GraphField flow_rhs(const GraphField& u, Exec mode = default_exec());

/// max |u| over quadrature nodes with |y| <= L (the window where the graph
/// bound is enforced; outside it the perturbation is tapered to zero).
double sup_u_in_window(const GraphField& u);

}  // namespace shrinkerlab
