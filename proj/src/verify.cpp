#include "shrinkerlab/verify.hpp"

#include <cmath>
#include <random>

#include "shrinkerlab/cylinder.hpp"
#include "shrinkerlab/scalar_models.hpp"
#include "shrinkerlab/spectral.hpp"

namespace shrinkerlab {

namespace {

void add(std::vector<CheckRow>& rows, const std::string& suite, const std::string& check,
         const std::string& params, double lhs, double rhs, double constant, bool pass) {
  rows.push_back({suite, check, params, lhs, rhs, constant, pass});
}

GraphField random_band_limited(const DiscPtr& disc, std::mt19937_64& rng, int jcap, int mcap) {
  auto uni = [&]() { return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0; };
  GraphField u(disc);
  for (int j = 0; j <= jcap; ++j)
    for (int par = 0; par <= (j == 0 ? 0 : 1); ++par)
      for (int m = 0; m <= mcap; ++m) u.at(j, m, par) = uni();
  return u;
}

void geometry_suite(std::vector<CheckRow>& rows) {
  // Closed-form identities on rotated cylinders of several dimensions.
  for (int k = 1; k <= 3; ++k) {
    int n = k + 1;
    CylinderSpec cyl = standard_cylinder(k, n);
    std::vector<double> p(n + 1, 0.0);
    p[0] = cyl.radius();
    p[n] = 0.7;  // somewhere along the axis
    auto shape = cylinder_shape_operator(cyl, p);
    double phi = cylinder_phi(cyl, p);
    bool ok = std::abs(shape.H - std::sqrt(0.5 * k)) < 1e-12 &&
              std::abs(shape.A_norm2 - 0.5) < 1e-12 && std::abs(phi) < 1e-12;
    add(rows, "geometry", "cylinder_identities", "k=" + std::to_string(k), shape.H,
        std::sqrt(0.5 * k), phi, ok);
  }

  // Taylor coefficients against central finite differences of the jets.
  {
    CylinderSpec cyl = standard_cylinder(1, 2);
    std::vector<double> p = {cyl.radius(), 0.0, 0.4};
    auto tc = taylor_coefficients(cyl, p);
    const double h = 1e-4;
    std::vector<double> y0 = {0.0, 0.0};
    auto jet = [&](double s, double y1, double y2) {
      return eval_offset_jet(cyl, p, s, {y1, y2});
    };
    double fd_dnu_ds = (jet(h, 0, 0).nu - jet(-h, 0, 0).nu) / (2 * h);
    double fd_d2nu = (jet(h, 0, 0).nu - 2.0 * jet(0, 0, 0).nu + jet(-h, 0, 0).nu) / (h * h);
    double fd_w11 = (jet(0, h, 0).w - 2.0 * jet(0, 0, 0).w + jet(0, -h, 0).w) / (h * h);
    double fd_deta_dy2 = (jet(0, 0, h).eta - jet(0, 0, -h).eta) / (2 * h);
    double err = std::max({std::abs(fd_dnu_ds - tc.dnu_ds), std::abs(fd_d2nu - tc.d2nu_ds2),
                           std::abs(fd_w11 - 1.0), std::abs(fd_deta_dy2 - tc.deta_dy[1])});
    add(rows, "geometry", "offset_taylor_vs_fd", "h=1e-4", err, 1e-6, 0.0, err < 1e-6);
  }

  // Radial closed forms.
  {
    double s = 0.3;
    auto cyl = standard_cylinder(1, 2);
    std::vector<double> p = {cyl.radius(), 0.0, 0.0};
    auto jet = eval_offset_jet(cyl, p, s, {0.0, 0.0});
    double e1 = std::abs(jet.nu - (1.0 + s / std::sqrt(2.0)));
    double e2 = std::abs(jet.eta - (std::sqrt(2.0) + s));
    double e3 = std::abs(jet.w - 1.0);
    add(rows, "geometry", "offset_radial_closed_form", "s=0.3", std::max({e1, e2, e3}), 1e-14,
        0.0, std::max({e1, e2, e3}) < 1e-14);
    double m = radial_gradient_M(1, 0.1);
    add(rows, "geometry", "gradient_radial_value", "s=0.1", m, -0.096, 0.0,
        std::abs(m + 0.096) < 5e-4);
  }

  auto disc = make_discretization(32, 24, 12.0);

  // Divergence-form H against the parametric-embedding route.
  {
    GraphField u = tapered_mode(disc, 1, 2);
    u *= 0.01;
    auto hu = graph_mean_curvature(u);
    SurfaceSample samp = embed_graph(u);
    double err = 0.0;
    for (int i = 0; i < disc->n_theta; ++i)
      for (int q = 0; q < disc->Q; ++q) {
        if (std::abs(disc->y[q]) > disc->L) continue;
        std::size_t idx = disc->node_index(i, q);
        err = std::max(err, std::abs(hu[idx] - samp.H[idx]));
      }
    add(rows, "geometry", "mean_curvature_two_routes", "u=0.01 mode(1,2)", err, 1e-9, 0.0,
        err < 1e-9);
  }

  // Quadratic smallness of M(eps v) - sigma eps L v.
  {
    std::vector<std::pair<int, int>> modes = {{0, 2}, {1, 0}};
    for (auto [j, m] : modes) {
      GraphField v = tapered_mode(disc, j, m);
      std::vector<double> epss = {1e-2, 5e-3, 2.5e-3}, errs;
      for (double e : epss) {
        GraphField u = v;
        u *= e;
        auto Mv = gradient_M(u);
        GraphField lin = apply_L(v);
        lin *= kSigmaGradVsL * e;
        auto linN = lin.nodal();
        std::vector<double> dif(Mv.size());
        for (std::size_t i = 0; i < Mv.size(); ++i) dif[i] = Mv[i] - linN[i];
        GraphField df = field_from_nodal(disc, dif);
        errs.push_back(df.l2_norm());
      }
      double order = std::log(errs[0] / errs[2]) / std::log(epss[0] / epss[2]);
      add(rows, "geometry", "gradient_linearization_order",
          "mode(" + std::to_string(j) + "," + std::to_string(m) + ")", order, 1.9, 0.0,
          order >= 1.9);
    }
  }

  // Simons residual refinement (second order).
  {
    GraphField u = tapered_mode(disc, 0, 2);
    u *= 0.02;
    auto resid_at = [&](int N) {
      std::vector<double> th(N), yy(2 * N + 1);
      for (int i = 0; i < N; ++i) th[i] = 2.0 * M_PI * i / N;
      for (int i = 0; i <= 2 * N; ++i) yy[i] = -4.0 + 8.0 * i / (2.0 * N);
      return simons_trace_residual(embed_graph_on(u, th, yy)).max_interior;
    };
    double r1 = resid_at(24), r2 = resid_at(48);
    double order = std::log2(r1 / r2);
    add(rows, "geometry", "simons_residual_order", "N=24 vs 48", order, 2.0, r1, order >= 1.8);
  }
}

void spectral_suite(std::vector<CheckRow>& rows) {
  auto disc = make_discretization(32, 24, 12.0);
  std::mt19937_64 rng(2024);

  {
    GraphField u = random_band_limited(disc, rng, 5, 8);
    auto vals = u.nodal();
    GraphField back = field_from_nodal(disc, vals);
    double err = 0.0;
    for (std::size_t i = 0; i < u.coeff.size(); ++i)
      err = std::max(err, std::abs(u.coeff[i] - back.coeff[i]));
    add(rows, "spectral", "nodal_spectral_roundtrip", "band-limited", err, 1e-10, 0.0,
        err < 1e-10);
    double quad = gaussian_norm(u, NormKind::L2);
    double pars = u.l2_norm();
    add(rows, "spectral", "parseval", "random field", quad, pars, 0.0,
        std::abs(quad - pars) < 1e-10 * (1.0 + pars));
  }

  {
    auto fd = fd_spectrum(64, 257, 12.0, 20);
    auto ex = exact_spectrum(20);
    std::sort(fd.begin(), fd.end());
    std::sort(ex.begin(), ex.end());
    double err = 0.0;
    for (int i = 0; i < 20; ++i) err = std::max(err, std::abs(fd[i] - ex[i]));
    add(rows, "spectral", "fd_spectrum_low_modes", "20 lowest", err, 1e-3, 0.0, err < 1e-3);
    add(rows, "spectral", "numeric_kernel_dim", "threshold 1e-6", numeric_kernel_dim(), 3, 0.0,
        numeric_kernel_dim() == 3);
  }

  {
    auto kb = kernel_basis(1, 2, disc);
    double worst = 0.0;
    for (const auto& v : kb.fields) worst = std::max(worst, apply_L(v).l2_norm());
    add(rows, "spectral", "kernel_annihilated", "dim=3", worst, 1e-10, 0.0,
        kb.dim == 3 && worst < 1e-10);
  }

  {
    GraphField u = random_band_limited(disc, rng, 4, 6);
    auto sp = project_kernel(u);
    auto sp2 = project_kernel(sp.u_kernel);
    double idem = 0.0;
    for (std::size_t i = 0; i < u.coeff.size(); ++i)
      idem = std::max(idem, std::abs(sp2.u_kernel.coeff[i] - sp.u_kernel.coeff[i]));
    double n2 = u.l2_norm() * u.l2_norm();
    double nk = sp.u_kernel.l2_norm(), np = sp.u_perp.l2_norm();
    double pyth = std::abs(n2 - nk * nk - np * np);
    add(rows, "spectral", "projection_idempotent_pythagoras", "random", idem + pyth, 1e-10, 0.0,
        idem + pyth < 1e-10);
  }

  {
    // Symmetry of the drift operator: <u, D v> = -<grad u, grad v>.
    GraphField u = random_band_limited(disc, rng, 3, 5);
    GraphField v = random_band_limited(disc, rng, 3, 5);
    GraphField Dv = apply_L(v);
    for (std::size_t i = 0; i < Dv.coeff.size(); ++i) Dv.coeff[i] -= v.coeff[i];
    double lhs = 0.0;
    for (std::size_t i = 0; i < u.coeff.size(); ++i) lhs += u.coeff[i] * Dv.coeff[i];
    auto un = u.nodal(), ut = u.nodal(1, 0), uy = u.nodal(0, 1);
    auto vt = v.nodal(1, 0), vy = v.nodal(0, 1);
    (void)un;
    double rhs = 0.0;
    const double r = disc->radius;
    for (int i = 0; i < disc->n_theta; ++i)
      for (int q = 0; q < disc->Q; ++q) {
        std::size_t idx = disc->node_index(i, q);
        rhs -= (ut[idx] * vt[idx] / (r * r) + uy[idx] * vy[idx]) * disc->circle_w[i] * disc->yw[q];
      }
    add(rows, "spectral", "drift_operator_symmetry", "random fields", lhs, rhs, 0.0,
        std::abs(lhs - rhs) < 1e-9 * (1.0 + std::abs(rhs)));
  }

  {
    int violations = 0;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      GraphField u = random_band_limited(disc, rng, 6, 12);
      auto rec = poincare_check(u);
      if (!rec.pass) ++violations;
      worst_ratio = std::max(worst_ratio, rec.lhs / rec.rhs);
    }
    add(rows, "spectral", "poincare_traced_constants", "200 random fields", violations, 0,
        worst_ratio, violations == 0);
  }

  {
    GraphField v = random_band_limited(disc, rng, 2, 4);
    double q1 = quadratic_norm(v);
    GraphField v3 = v;
    v3 *= 3.0;
    double q3 = quadratic_norm(v3);
    add(rows, "spectral", "quadratic_norm_homogeneity", "a=3", q3, 9.0 * q1, 0.0,
        std::abs(q3 - 9.0 * q1) < 1e-9 * (1.0 + q3));
    add(rows, "spectral", "kernel_quadratic_constant", "k=1 n=2", kernel_quadratic_constant(disc),
        0.0, kernel_quadratic_constant(disc), true);
  }

  {
    double mu = spectral_gap(1, 2);
    GraphField u = random_band_limited(disc, rng, 5, 9);
    auto sp = project_kernel(u);
    double lnorm = apply_L(u).l2_norm();
    bool ok = std::abs(mu - 0.5) < 1e-14 && mu * sp.u_perp.l2_norm() <= lnorm * (1.0 + 1e-12);
    add(rows, "spectral", "gap_inverts_L", "mu=1/2", mu * sp.u_perp.l2_norm(), lnorm, mu, ok);
  }
}

void scalar_suite(std::vector<CheckRow>& rows) {
  {
    int verified = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
      double eps = 0.2 + 0.7 * (i % 8) / 7.0;
      DecaySequence seq = make_admissible_sequence(150, eps, 0.5 + 0.1 * (i % 5), 1000 + i);
      if (discrete_decay_bound(seq).verified) ++verified;
    }
    add(rows, "scalar", "discrete_decay_batch", "200 sequences", verified, 200, 0.0,
        verified == 200);
  }
  {
    DecaySequence seq;
    seq.eps = 1.0;
    seq.K = 2.0;
    for (int t = 0; t <= 300; ++t) seq.values.push_back(1.0 / (1.0 + t));
    auto b = discrete_decay_bound(seq);
    add(rows, "scalar", "decay_harmonic_example", "f=1/(1+t)", b.C, 0.0, b.C, b.verified);
  }
  {
    // sqrt increments ~ 2 t^{-5/2}: the tail crosses 1e-6 near t ~ 3e4.
    DecaySequence seq;
    seq.eps = 0.25;
    for (int t = 0; t <= 30000; ++t) seq.values.push_back(std::pow(1.0 + t, -4.0));
    double kmin = 1e300;
    for (std::size_t t = 1; t + 1 < seq.values.size(); ++t)
      kmin = std::min(kmin, (seq.values[t - 1] - seq.values[t + 1]) /
                                std::pow(seq.values[t], 1.0 + seq.eps));
    seq.K = 0.9 * kmin;
    auto sums = sqrt_increment_sum(seq);
    add(rows, "scalar", "sqrt_increment_tail", "(1+t)^-4", sums.tail, 1e-6, sums.certificate,
        sums.tail < 1e-6 && sums.total <= sums.certificate);
  }
  {
    ModelFunction f = parse_polynomial(1, {{1.0, {2}}});
    auto res = ode_gradient_flow(f, {1.0}, 6.0);
    double xend = res.traj.back()[0];
    bool ok = std::abs(res.length - 1.0) < 1e-5 && std::abs(xend - std::exp(-12.0)) < 1e-6;
    add(rows, "scalar", "gradient_flow_quadratic", "f=x^2", res.length, 1.0, 0.0, ok);
  }
  {
    ModelFunction f = parse_polynomial(1, {{1.0 / 27.0, {3}}});
    auto res = ode_gradient_flow(f, {1.0}, 50.0);
    bool ok = true;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
      double t = res.times[i];
      double closed = std::pow(std::pow(res.fvals[0], -1.0 / 3.0) + t / 3.0, -3.0);
      if (std::abs(res.fvals[i] - closed) > 1e-6 * (1.0 + closed)) ok = false;
      if (t >= 1.0 && res.fvals[i] > 27.0 * std::pow(t, -3.0) * (1.0 + 1e-9)) ok = false;
    }
    add(rows, "scalar", "gradient_flow_beta_two_thirds", "f=x^3/27", res.fvals.back(),
        27.0 * std::pow(res.times.back(), -3.0), 0.0, ok);
  }
  {
    ModelFunction good = parse_polynomial(2, {{1.0, {2, 0}}, {1.0, {0, 3}}});
    auto rec = taylor_region_check(good, 0.1, 41);
    add(rows, "scalar", "taylor_region_x2_y3", "box=0.1", rec.C_near, rec.C_far,
        std::max(rec.C_near, rec.C_far), rec.hypothesis_ok && rec.pass);
    ModelFunction badf = parse_polynomial(2, {{1.0, {2, 0}}, {1.0, {0, 4}}});
    auto rec2 = taylor_region_check(badf, 0.1, 41);
    add(rows, "scalar", "taylor_region_x2_y4_fails", "box=0.1", rec2.c_fit_refined, rec2.c_fit,
        0.0, !rec2.hypothesis_ok);
  }
  {
    auto bump = [](double z) {
      double a = std::abs(z);
      if (a >= 1.0) return 0.0;
      return std::exp(-z * z / (1.0 - z * z));
    };
    std::vector<double> deltas = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::vector<double> cs, cs_shift;
    for (double del : deltas) {
      auto u = [&](double x) { return bump(x / del); };
      cs.push_back(interpolation_check(u, 1.0, 2, 8001).c0);
      cs_shift.push_back(interpolation_check(u, 1.0, 2, 8001, 0.05).c0);
    }
    double spread = *std::max_element(cs.begin(), cs.end()) /
                    *std::min_element(cs.begin(), cs.end());
    double growth = cs_shift.back() / cs_shift.front();
    add(rows, "scalar", "interpolation_bump_bounded", "k=2 n=1", spread, 10.0,
        *std::max_element(cs.begin(), cs.end()), spread < 10.0);
    add(rows, "scalar", "interpolation_exponent_sharpness", "a+0.05", growth, 1.5, 0.0,
        growth > 1.5);
  }
}

}  // namespace

std::vector<CheckRow> run_verify(const std::string& suite) {
  std::vector<CheckRow> rows;
  bool all = suite == "all";
  if (all || suite == "geometry") geometry_suite(rows);
  if (all || suite == "spectral") spectral_suite(rows);
  if (all || suite == "scalar") scalar_suite(rows);
  if (rows.empty()) throw std::invalid_argument("unknown suite: " + suite);
  return rows;
}

bool all_pass(const std::vector<CheckRow>& rows) {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

}  // namespace shrinkerlab
