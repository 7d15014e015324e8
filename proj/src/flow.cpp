#include "shrinkerlab/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace shrinkerlab {

FlowScheme flow_scheme_from_string(const std::string& s) {
  if (s == "imex-spectral") return FlowScheme::ImexSpectral;
  if (s == "explicit-rk4") return FlowScheme::ExplicitRk4;
  throw std::invalid_argument("unknown scheme: " + s);
}

std::string to_string(FlowScheme s) {
  return s == FlowScheme::ImexSpectral ? "imex-spectral" : "explicit-rk4";
}

namespace {

std::vector<double> rhs_coeffs(const DiscPtr& disc, const std::vector<double>& c) {
  GraphField u(disc);
  u.coeff = c;
  return flow_rhs(u).coeff;
}

std::vector<int> unstable_mode_indices(const Discretization& d) {
  // dilation (0,0); translations (1,0) cos/sin and (0,1)
  std::vector<int> out;
  out.push_back(static_cast<int>(d.mode_index(0, 0)));
  out.push_back(static_cast<int>(d.mode_index(d.theta_basis_index(1, 0), 0)));
  out.push_back(static_cast<int>(d.mode_index(d.theta_basis_index(1, 1), 0)));
  out.push_back(static_cast<int>(d.mode_index(0, 1)));
  return out;
}

}  // namespace

void project_out_unstable(GraphField& u) {
  for (int i : unstable_mode_indices(*u.disc)) u.coeff[i] = 0.0;
}

double unstable_amplitude(const GraphField& u) {
  double m = 0.0;
  for (int i : unstable_mode_indices(*u.disc)) m = std::max(m, std::abs(u.coeff[i]));
  return m;
}

std::array<double, 3> kernel_amplitudes(const GraphField& u) {
  const auto& d = *u.disc;
  return {u.coeff[d.mode_index(0, 2)],
          u.coeff[d.mode_index(d.theta_basis_index(1, 0), 1)],
          u.coeff[d.mode_index(d.theta_basis_index(1, 1), 1)]};
}

StepResult flow_step(FlowState& st, const FlowConfig& cfg) {
  const auto& d = *st.u.disc;
  const double dt = cfg.dt;
  std::vector<double> c = st.u.coeff;
  std::vector<double> cnew(c.size());

  try {
  if (cfg.scheme == FlowScheme::ImexSpectral) {
    auto r = rhs_coeffs(st.u.disc, c);
    for (int tb = 0; tb < d.n_tb; ++tb)
      for (int m = 0; m <= d.M; ++m) {
        std::size_t i = d.mode_index(tb, m);
        double lam = d.eigenvalue(tb, m);
        cnew[i] = (c[i] + dt * (r[i] - lam * c[i])) / (1.0 - dt * lam);
      }
  } else {
    auto k1 = rhs_coeffs(st.u.disc, c);
    std::vector<double> tmp(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) tmp[i] = c[i] + 0.5 * dt * k1[i];
    auto k2 = rhs_coeffs(st.u.disc, tmp);
    for (std::size_t i = 0; i < c.size(); ++i) tmp[i] = c[i] + 0.5 * dt * k2[i];
    auto k3 = rhs_coeffs(st.u.disc, tmp);
    for (std::size_t i = 0; i < c.size(); ++i) tmp[i] = c[i] + dt * k3[i];
    auto k4 = rhs_coeffs(st.u.disc, tmp);
    for (std::size_t i = 0; i < c.size(); ++i)
      cnew[i] = c[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  } catch (const std::domain_error& e) {
    return {FlowStatus::GraphBreakdown, e.what()};
  }

  for (double v : cnew)
    if (!std::isfinite(v)) return {FlowStatus::NonFinite, "non-finite coefficients; step rejected"};

  GraphField unew(st.u.disc);
  unew.coeff = std::move(cnew);
  if (cfg.stabilize) project_out_unstable(unew);

  double sup = sup_u_in_window(unew);
  if (sup >= (1.0 - cfg.margin_frac) * d.radius)
    return {FlowStatus::GraphBreakdown,
            "graph bound exceeded: sup|u| = " + std::to_string(sup)};

  st.u = std::move(unew);
  st.s += dt;
  st.step += 1;
  return {FlowStatus::Ok, ""};
}

double f_functional(const SurfaceSample& s) {
  if (!s.quadrature_grid) throw std::invalid_argument("f_functional needs quadrature grid");
  double acc = 0.0;
  for (double w : s.gauss_w) acc += w;
  return acc / (4.0 * M_PI);  // (4 pi)^{-n/2}, n = 2
}

double f_functional(const GraphField& u) { return f_functional(embed_graph(u)); }

double recentered_gaussian_area(const GraphField& u, const Vec3& x0, double t0) {
  // Uniform axis grid: the recentred Gaussian decays slower than the
  // quadrature weight when t0 > 1, so Gauss nodes cannot be reused.
  const int NY = 401;
  const double Y = 30.0;
  std::vector<double> ys(NY);
  for (int i = 0; i < NY; ++i) ys[i] = -Y + 2.0 * Y * i / (NY - 1);
  SurfaceSample s = embed_graph_on(u, u.disc->theta, ys);
  const double dth = 2.0 * M_PI / u.disc->n_theta;
  const double dy = 2.0 * Y / (NY - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.n_nodes(); ++i) {
    double det = s.g11[i] * s.g22[i] - s.g12[i] * s.g12[i];
    Vec3 dx = s.x[i] - x0;
    acc += std::sqrt(std::max(det, 0.0)) * std::exp(-dot(dx, dx) / (4.0 * t0));
  }
  return acc * dth * dy / (4.0 * M_PI * t0);
}

EntropyEstimate entropy_estimate(const GraphField& u) {
  EntropyEstimate best;
  best.center = {0, 0, 0};
  best.scale = 1.0;
  best.value = recentered_gaussian_area(u, best.center, best.scale);

  // Coarse deterministic scan, strict improvement only.
  const std::vector<double> cs = {-3.0, -1.5, 0.0, 1.5, 3.0};
  const std::vector<double> ts = {0.25, 0.5, 1.0, 2.0, 4.0};
  for (double t0 : ts)
    for (double cx : cs)
      for (double cy : cs)
        for (double cz : cs) {
          Vec3 x0{cx, cy, cz};
          double v = recentered_gaussian_area(u, x0, t0);
          if (v > best.value * (1.0 + 1e-12)) {
            best.value = v;
            best.center = x0;
            best.scale = t0;
          }
        }

  // Local coordinate-wise refinement.
  double step_c = 0.75, step_t = 0.5;
  for (int it = 0; it < 40; ++it) {
    bool improved = false;
    for (int dim = 0; dim < 4; ++dim)
      for (int sgn = -1; sgn <= 1; sgn += 2) {
        Vec3 x0 = best.center;
        double t0 = best.scale;
        if (dim < 3)
          x0[dim] += sgn * step_c;
        else {
          t0 *= std::exp(sgn * step_t);
          if (t0 < 0.25 || t0 > 4.0) continue;
        }
        double v = recentered_gaussian_area(u, x0, t0);
        if (v > best.value * (1.0 + 1e-13)) {
          best.value = v;
          best.center = x0;
          best.scale = t0;
          improved = true;
        }
      }
    if (!improved) {
      step_c *= 0.5;
      step_t *= 0.5;
      if (step_c < 1e-4 && step_t < 1e-4) break;
    }
  }
  return best;
}

double flow_phi_l2(const SurfaceSample& s, double R) {
  double v = phi_norm(s, 2, R);
  return v / std::sqrt(4.0 * M_PI);
}

double flow_phi_l1(const SurfaceSample& s, double R) {
  return phi_norm(s, 1, R) / (4.0 * M_PI);
}

double local_gaussian_density(const GraphField& u, const Vec3& x0, double tau) {
  if (!(tau > 0.0) || tau > 0.5)
    throw std::invalid_argument("local_gaussian_density: tau in (0, 1/2]");
  const double sig = std::sqrt(tau);
  const int NT = std::max(u.disc->n_theta, 2 + 8 * static_cast<int>(std::ceil(1.0 / sig)));
  std::vector<double> ths(NT);
  for (int i = 0; i < NT; ++i) ths[i] = 2.0 * M_PI * i / NT;
  // Axis window around the center; the remainder is below e^{-16}.
  double half = std::max(1.0, 8.0 * sig);
  double lo = std::max(x0[2] - half, -u.disc->L - 2.0);
  double hi = std::min(x0[2] + half, u.disc->L + 2.0);
  if (hi <= lo) return 0.0;
  double spacing = std::min(sig / 4.0, 0.05);
  int NY = std::min<int>(4001, static_cast<int>(std::ceil((hi - lo) / spacing)) + 1);
  std::vector<double> ys(NY);
  for (int i = 0; i < NY; ++i) ys[i] = lo + (hi - lo) * i / (NY - 1);
  SurfaceSample s = embed_graph_on(u, ths, ys);
  const double dth = 2.0 * M_PI / NT, dy = (hi - lo) / (NY - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.n_nodes(); ++i) {
    double det = s.g11[i] * s.g22[i] - s.g12[i] * s.g12[i];
    Vec3 dx = s.x[i] - x0;
    acc += std::sqrt(std::max(det, 0.0)) * std::exp(-dot(dx, dx) / (4.0 * tau));
  }
  return acc * dth * dy / (4.0 * M_PI * tau);
}

double rescaled_time_from_mcf(double t) {
  if (t >= 0.0) throw std::domain_error("rescaled_time_from_mcf: need t < 0");
  return -std::log(-t);
}

double mcf_time_from_rescaled(double s) { return -std::exp(-s); }

double rescaled_scale_factor(double t) {
  if (t >= 0.0) throw std::domain_error("rescaled_scale_factor: need t < 0");
  return 1.0 / std::sqrt(-t);
}

EnergyIdentityResidual energy_identity_residual(const std::vector<SeriesRow>& rows) {
  if (rows.size() < 3) throw std::invalid_argument("need >= 3 rows");
  EnergyIdentityResidual res;
  double scale = 0.0;
  for (const auto& r : rows) scale = std::max(scale, r.phi_l2 * r.phi_l2);
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    double ds = 0.5 * (rows[i + 1].s - rows[i - 1].s);
    double dFds = (rows[i + 1].F - rows[i - 1].F) / (2.0 * ds);
    double resid = std::abs(dFds + rows[i].phi_l2 * rows[i].phi_l2);
    res.max_abs = std::max(res.max_abs, resid);
    if (scale > 0.0) res.max_rel = std::max(res.max_rel, resid / scale);
  }
  return res;
}

double phi_evolution_residual(const GraphField& u_prev, const GraphField& u_mid,
                              const GraphField& u_next, double dt, double R) {
  SurfaceSample sm = embed_graph(u_mid);
  SurfaceSample sp = embed_graph(u_next);
  SurfaceSample sq = embed_graph(u_prev);
  auto Lphi = surface_L_apply(sm, sm.phi);
  std::vector<double> resid2(sm.phi.size());
  for (std::size_t i = 0; i < resid2.size(); ++i) {
    double dphidt = (sp.phi[i] - sq.phi[i]) / (2.0 * dt);
    double r = dphidt - Lphi[i];
    resid2[i] = r * r;
  }
  return std::sqrt(integrate_gauss(sm, resid2, R));
}

double f_monotonicity_violation(const std::vector<SeriesRow>& rows) {
  double worst = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    worst = std::max(worst, rows[i].F - rows[i - 1].F);
  return worst;
}

}  // namespace shrinkerlab
