#include "shrinkerlab/graph_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace shrinkerlab {

namespace {

struct NodeGeom {
  double w, nu, eta, Hu, phi, M, rhs;
};

// Closed-form offset-map partials on the k=1 cylinder.  b1 = 1 - s*a with
// a = -H the sphere principal curvature; the axis direction is flat.  H is
// written as radius/2 so that eta/2 - Hu cancels exactly at u == 0.
inline NodeGeom node_geometry(double radius, double yq, double u, double ut,
                              double uy, double utt, double uty, double uyy) {
  const double H = radius / 2.0;
  const double a = -H;
  const double s = u;
  const double y1 = ut / radius;  // arclength gradient component
  const double y2 = uy;

  const double b1 = 1.0 - s * a;
  const double w2 = 1.0 + (y1 / b1) * (y1 / b1) + y2 * y2;
  const double w = std::sqrt(w2);
  const double w3 = w2 * w;
  const double nu = w * b1;

  const double dnu_ds = y1 * y1 * a / (b1 * b1 * w) - a * w;
  const double dnu_s_y1 = a * y1 * (1.0 + y2 * y2) / (b1 * b1 * w3);
  const double dnu_s_y2 = -a * y2 * (1.0 + 2.0 * y1 * y1 / (b1 * b1) + y2 * y2) / w3;
  const double dnu_11 = (1.0 + y2 * y2) / (b1 * w3);
  const double dnu_12 = -y1 * y2 / (b1 * w3);
  const double dnu_22 = b1 * (1.0 + y1 * y1 / (b1 * b1)) / w3;

  const double u11 = utt / (radius * radius);
  const double u12 = uty / radius;
  const double u22 = uyy;

  const double Hu = (w / nu) * (dnu_ds - dnu_s_y1 * y1 - dnu_s_y2 * y2 -
                                (dnu_11 * u11 + 2.0 * dnu_12 * u12 + dnu_22 * u22));

  const double eta = (radius + s - yq * y2) / w;
  const double phi = 0.5 * eta - Hu;
  const double efac = std::exp(-(2.0 * radius * s + s * s) / 4.0);
  const double M = (nu / w) * (Hu - 0.5 * eta) * efac;
  const double rhs = w * (0.5 * eta - Hu);
  return {w, nu, eta, Hu, phi, M, rhs};
}

template <bool Parallel>
void graph_geometry_impl(const Discretization& d, const NodalPack& p, GraphGeometry& out) {
  const std::size_t N = d.n_nodes();
  out.w.resize(N);
  out.nu.resize(N);
  out.eta.resize(N);
  out.Hu.resize(N);
  out.phi.resize(N);
  out.M.resize(N);
  out.rhs.resize(N);
  const double radius = d.radius;
  par_for(N, [&](std::size_t idx) {
    const int q = static_cast<int>(idx % d.Q);
    NodeGeom g = node_geometry(radius, d.y[q], p.u[idx], p.ut[idx], p.uy[idx],
                               p.utt[idx], p.uty[idx], p.uyy[idx]);
    out.w[idx] = g.w;
    out.nu[idx] = g.nu;
    out.eta[idx] = g.eta;
    out.Hu[idx] = g.Hu;
    out.phi[idx] = g.phi;
    out.M[idx] = g.M;
    out.rhs[idx] = g.rhs;
  }, Parallel ? Exec::Parallel : Exec::Serial);
}

void check_inputs(const Discretization& d, const NodalPack& p) {
  for (std::size_t idx = 0; idx < p.u.size(); ++idx) {
    const int q = static_cast<int>(idx % d.Q);
    if (std::abs(d.y[q]) > d.L) continue;
    if (!std::isfinite(p.u[idx]) || !std::isfinite(p.ut[idx]) || !std::isfinite(p.uy[idx]) ||
        !std::isfinite(p.utt[idx]) || !std::isfinite(p.uty[idx]) || !std::isfinite(p.uyy[idx]))
      throw std::invalid_argument("graph geometry: non-finite derivative data");
    if (1.0 + p.u[idx] / d.radius <= 1e-6)
      throw std::domain_error("graph geometry: offset singularity (graph reaches the axis)");
  }
}

}  // namespace

namespace kernels {
void graph_geometry_serial(const Discretization& d, const NodalPack& p, GraphGeometry& out) {
  graph_geometry_impl<false>(d, p, out);
}
void graph_geometry_parallel(const Discretization& d, const NodalPack& p, GraphGeometry& out) {
  graph_geometry_impl<true>(d, p, out);
}
}  // namespace kernels

GraphGeometry graph_geometry(const GraphField& u, Exec mode) {
  NodalPack p = eval_pack(u);
  check_inputs(*u.disc, p);
  GraphGeometry out;
  if (mode == Exec::Parallel)
    kernels::graph_geometry_parallel(*u.disc, p, out);
  else
    kernels::graph_geometry_serial(*u.disc, p, out);
  return out;
}

std::vector<double> graph_mean_curvature(const GraphField& u, Exec mode) {
  return graph_geometry(u, mode).Hu;
}

std::vector<double> gradient_M(const GraphField& u, Exec mode) {
  return graph_geometry(u, mode).M;
}

GraphField flow_rhs(const GraphField& u, Exec mode) {
  GraphGeometry g = graph_geometry(u, mode);
  return field_from_nodal(u.disc, g.rhs);
}

double sup_u_in_window(const GraphField& u) {
  auto vals = u.nodal();
  const auto& d = *u.disc;
  double m = 0.0;
  for (int i = 0; i < d.n_theta; ++i)
    for (int q = 0; q < d.Q; ++q)
      if (std::abs(d.y[q]) <= d.L)
        m = std::max(m, std::abs(vals[d.node_index(i, q)]));
  return m;
}

}  // namespace shrinkerlab
