#include "shrinkerlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shrinkerlab {

namespace {

double fit_objective(const SurfaceSample& s, double R, const Vec3& axis) {
  const double r0 = std::sqrt(2.0);
  double acc = 0.0;
  const double R2 = R * R;
  for (std::size_t i = 0; i < s.n_nodes(); ++i) {
    const Vec3& x = s.x[i];
    double x2 = dot(x, x);
    if (R >= 0 && x2 > R2) continue;
    double ax = dot(x, axis);
    double dist = std::sqrt(std::max(x2 - ax * ax, 0.0));
    double dev = dist - r0;
    acc += dev * dev * s.gauss_w[i];
  }
  return acc;
}

void chart_basis(const Vec3& b, Vec3& t1, Vec3& t2) {
  Vec3 seed = std::abs(b[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  t1 = normalized(seed - dot(seed, b) * b);
  t2 = cross(b, t1);
}

// Two-parameter Nelder-Mead on the axis chart around `base`.
struct NmResult {
  Vec3 axis;
  double f = 0.0;
  bool converged = false;
};

NmResult nelder_mead_axis(const SurfaceSample& s, double R, const Vec3& base,
                          double init_step, int max_iter, double tol) {
  Vec3 t1, t2;
  chart_basis(base, t1, t2);
  auto axis_of = [&](double a, double b) { return normalized(base + a * t1 + b * t2); };
  auto eval = [&](double a, double b) { return fit_objective(s, R, axis_of(a, b)); };

  struct Pt {
    double a, b, f;
  };
  std::array<Pt, 3> simplex{Pt{0, 0, 0}, Pt{init_step, 0, 0}, Pt{0, init_step, 0}};
  for (auto& p : simplex) p.f = eval(p.a, p.b);

  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    std::sort(simplex.begin(), simplex.end(), [](const Pt& x, const Pt& y) { return x.f < y.f; });
    if (std::abs(simplex[2].f - simplex[0].f) < tol * (1.0 + std::abs(simplex[0].f))) {
      converged = true;
      break;
    }
    double ca = 0.5 * (simplex[0].a + simplex[1].a);
    double cb = 0.5 * (simplex[0].b + simplex[1].b);
    double ra = ca + (ca - simplex[2].a), rb = cb + (cb - simplex[2].b);
    double fr = eval(ra, rb);
    if (fr < simplex[0].f) {
      double ea = ca + 2.0 * (ca - simplex[2].a), eb = cb + 2.0 * (cb - simplex[2].b);
      double fe = eval(ea, eb);
      simplex[2] = fe < fr ? Pt{ea, eb, fe} : Pt{ra, rb, fr};
    } else if (fr < simplex[1].f) {
      simplex[2] = Pt{ra, rb, fr};
    } else {
      double ka = ca + 0.5 * (simplex[2].a - ca), kb = cb + 0.5 * (simplex[2].b - cb);
      double fk = eval(ka, kb);
      if (fk < simplex[2].f) {
        simplex[2] = Pt{ka, kb, fk};
      } else {
        for (int i = 1; i < 3; ++i) {
          simplex[i].a = simplex[0].a + 0.5 * (simplex[i].a - simplex[0].a);
          simplex[i].b = simplex[0].b + 0.5 * (simplex[i].b - simplex[0].b);
          simplex[i].f = eval(simplex[i].a, simplex[i].b);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(), [](const Pt& x, const Pt& y) { return x.f < y.f; });
  return {axis_of(simplex[0].a, simplex[0].b), simplex[0].f, converged};
}

// Deterministic quasi-uniform directions on the upper hemisphere.
std::vector<Vec3> hemisphere_starts(int count) {
  std::vector<Vec3> out;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    double z = (i + 0.5) / count;  // (0,1]
    double rr = std::sqrt(std::max(1.0 - z * z, 0.0));
    double ang = golden * i;
    out.push_back({rr * std::cos(ang), rr * std::sin(ang), z});
  }
  return out;
}

}  // namespace

CylinderFit fit_cylinder(const SurfaceSample& sample, double R, const FitOptions& opts) {
  if (!sample.quadrature_grid)
    throw std::invalid_argument("fit_cylinder: needs quadrature-grid sample");
  NmResult best;
  best.f = 1e300;
  std::vector<Vec3> starts;
  if (opts.warm_start) {
    starts.push_back(normalized(*opts.warm_start));
  } else {
    starts = hemisphere_starts(opts.starts);
  }
  for (const auto& s0 : starts) {
    NmResult r = nelder_mead_axis(sample, R, s0, 0.2, opts.max_iter, opts.tol);
    if (r.f < best.f) best = r;
  }
  // Polish around the winner with a smaller simplex.
  NmResult polish = nelder_mead_axis(sample, R, best.axis, 1e-3, opts.max_iter, opts.tol * 1e-2);
  if (polish.f < best.f) best = polish;

  CylinderFit fit;
  Vec3 a = best.axis;
  if (a[2] < 0.0 || (a[2] == 0.0 && a[0] < 0.0)) a = -1.0 * a;
  fit.axis = a;
  fit.d2 = best.f;
  fit.d = std::sqrt(std::max(best.f, 0.0));
  fit.converged = best.converged;
  fit.axis_a = a[0];
  fit.axis_b = a[1];
  return fit;
}

double distance_to_cylinders(const SurfaceSample& sample, double R, const FitOptions& opts) {
  return fit_cylinder(sample, R, opts).d;
}

CylindricalScale cylindrical_scale(const SurfaceSample& sample, const CylinderFit& fit,
                                   double eps0, int ell, double C_ell) {
  CylindricalScale out;
  out.ell = ell;
  out.C_ell = C_ell;
  out.eps0 = eps0;
  const double r0 = std::sqrt(2.0);
  const Vec3 v = fit.axis;
  const std::size_t N = sample.n_nodes();

  auto nablaA = nabla_A_norm(sample, std::min(std::max(ell, 1), 2));

  // Per-node constraint data: graph deviation from the fitted cylinder and
  // its first/second surface derivatives via the ambient distance function.
  std::vector<double> c2(N, 0.0);
  std::vector<std::uint8_t> graphical(N, 1);
  for (std::size_t i = 0; i < N; ++i) {
    const Vec3& x = sample.x[i];
    double ax = dot(x, v);
    double dist = std::sqrt(std::max(dot(x, x) - ax * ax, 1e-30));
    Vec3 rho = (1.0 / dist) * (x - ax * v);  // ambient gradient of dist
    double rn = dot(rho, sample.nrm[i]);
    if (dist < 0.3 * r0 || std::abs(rn) < 0.3) {
      graphical[i] = 0;
      continue;
    }
    double uval = dist - r0;

    // Orthonormal tangent frame (same construction as the sample's A).
    double g11 = sample.g11[i], g12 = sample.g12[i], g22 = sample.g22[i];
    double s1 = std::sqrt(g11);
    double c12 = g12 / g11;
    double ell2 = std::sqrt(std::max(g22 - g12 * c12, 1e-30));
    Vec3 e1 = (1.0 / s1) * sample.xt[i];
    Vec3 e2 = (1.0 / ell2) * (sample.xy[i] - c12 * sample.xt[i]);

    double rho1 = dot(rho, e1), rho2 = dot(rho, e2);
    double grad = std::hypot(rho1, rho2);

    // Ambient Hessian of dist: (I - v v^T - rho rho^T)/dist; surface Hessian
    // adds <grad dist, n> A.
    auto hamb = [&](const Vec3& X, const Vec3& Y) {
      return (dot(X, Y) - dot(X, v) * dot(Y, v) - dot(X, rho) * dot(Y, rho)) / dist;
    };
    double h11 = hamb(e1, e1) + rn * sample.a11[i];
    double h12 = hamb(e1, e2) + rn * sample.a12[i];
    double h22 = hamb(e2, e2) + rn * sample.a22[i];
    double hess = std::sqrt(h11 * h11 + 2.0 * h12 * h12 + h22 * h22);
    c2[i] = std::max({std::abs(uval), grad, hess});
  }

  const double cap = std::sqrt(sample.disc->L * sample.disc->L + 2.0);
  auto feasible = [&](double R) {
    const double R2 = R * R;
    for (std::size_t i = 0; i < N; ++i) {
      double y = sample.ys[i % sample.ys.size()];
      if (std::abs(y) > sample.disc->L) continue;  // beyond the sampled window
      if (dot(sample.x[i], sample.x[i]) > R2) continue;
      if (!graphical[i]) return false;
      if (c2[i] > eps0) return false;
      if (nablaA[i] > C_ell) return false;
    }
    return true;
  };

  if (!feasible(1.0)) {
    out.r = 0.0;
    out.graphical = false;
    return out;
  }
  if (feasible(cap)) {
    out.r = cap;
    out.capped = true;
    return out;
  }
  double lo = 1.0, hi = cap;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  out.r = lo;
  return out;
}

ShrinkerScale shrinker_scale(double F_before, double F_after) {
  double drop = F_before - F_after;
  if (drop < -1e-12) throw std::runtime_error("shrinker_scale: F increased over the window");
  ShrinkerScale s;
  if (drop < 1e-300) {
    s.infinite = true;
    s.R = std::numeric_limits<double>::infinity();
    return s;
  }
  double r2 = -2.0 * std::log(drop);
  s.R = r2 > 0 ? std::sqrt(r2) : 0.0;
  return s;
}

ExponentFit exponent_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 4)
    throw std::invalid_argument("exponent_fit: need >= 4 samples");
  double xmin = 1e300, xmax = 0.0;
  for (double v : x) {
    if (!(v > 0.0)) throw std::invalid_argument("exponent_fit: positive x required");
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  if (xmax / xmin < 10.0)
    throw std::invalid_argument("exponent_fit: samples must span a decade");
  std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y[i] > 0.0)) throw std::invalid_argument("exponent_fit: positive y required");
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-14) throw std::invalid_argument("exponent_fit: degenerate spread");
  ExponentFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::log(y[i]) - (f.intercept + f.slope * std::log(x[i]));
    ssr += r * r;
  }
  double sigma2 = n > 2 ? ssr / (n - 2) : 0.0;
  f.band = std::sqrt(sigma2 * n / denom);
  return f;
}

namespace {
bool all_below(const std::vector<FamilyPoint>& family, double FamilyPoint::*field, double tol) {
  for (const auto& p : family)
    if (p.*field > tol) return false;
  return true;
}
}  // namespace

LojasiewiczReport first_lojasiewicz_report(const std::vector<FamilyPoint>& family,
                                           double R, const std::string& name) {
  LojasiewiczReport rep;
  rep.family = name;
  rep.R = R;
  if (all_below(family, &FamilyPoint::d2, 1e-300)) {
    rep.pass = true;
    rep.note = "lhs identically zero (critical point)";
    return rep;
  }
  std::vector<double> xs, ys;
  for (const auto& p : family) {
    xs.push_back(p.phi_l1);
    ys.push_back(p.d2);
  }
  ExponentFit fit = exponent_fit(xs, ys);
  rep.fitted_exponent = fit.slope;
  double b = std::min(1.0, fit.slope);
  double tail = std::exp(-b * R * R / 4.0);
  double cmax = 0.0;
  for (const auto& p : family)
    cmax = std::max(cmax, p.d2 / (std::pow(p.phi_l1, b) + tail));
  rep.fitted_constant = cmax;
  rep.lhs = family.back().d2;
  rep.rhs_terms = {std::pow(family.back().phi_l1, b), tail};
  rep.pass = std::isfinite(cmax) && fit.slope > 0.0;
  return rep;
}

LojasiewiczReport gradient_lojasiewicz_report(const std::vector<FamilyPoint>& family,
                                              double R, const std::string& name) {
  LojasiewiczReport rep;
  rep.family = name;
  rep.R = R;
  if (all_below(family, &FamilyPoint::f_gap, 1e-300)) {
    rep.pass = true;
    rep.note = "lhs identically zero (critical point)";
    return rep;
  }
  std::vector<double> xs, ys;
  for (const auto& p : family) {
    xs.push_back(p.grad_norm);
    ys.push_back(p.f_gap);
  }
  ExponentFit fit = exponent_fit(xs, ys);
  rep.fitted_exponent = fit.slope;
  double e = std::min(1.5, fit.slope);  // 2/3-power inequality exponent cap
  double tail1 = std::exp(-3.0 * R * R / 8.0);
  double tail2 = std::exp(-3.0 * (R - 1.0) * (R - 1.0) / 16.0);
  double cmax = 0.0;
  for (const auto& p : family)
    cmax = std::max(cmax, p.f_gap / (std::pow(p.phi_l2, e) + tail1 + tail2));
  rep.fitted_constant = cmax;
  rep.lhs = family.back().f_gap;
  rep.rhs_terms = {std::pow(family.back().phi_l2, e), tail1, tail2};
  rep.pass = std::isfinite(cmax) && fit.slope > 1.0;
  return rep;
}

DiscreteFlowRecord discrete_flow_inequality(const std::vector<double>& t,
                                            const std::vector<double>& F, double F_ref,
                                            double tau, double t_min) {
  if (t.size() != F.size() || t.size() < 3)
    throw std::invalid_argument("discrete_flow_inequality: bad series");
  if (!(tau > 1.0 / 3.0 && tau < 1.0))
    throw std::invalid_argument("discrete_flow_inequality: tau in (1/3, 1)");
  double dtrow = t[1] - t[0];
  int off = static_cast<int>(std::llround(1.0 / dtrow));
  if (off < 1 || std::abs(off * dtrow - 1.0) > 1e-9)
    throw std::invalid_argument("discrete_flow_inequality: rows must tile unit windows");

  DiscreteFlowRecord rec;
  rec.tau = tau;
  std::vector<double> Ks;
  std::vector<std::size_t> idxs;
  for (std::size_t i = off; i + off < t.size(); ++i) {
    if (t[i] < t_min) continue;
    double gap = F[i] - F_ref;
    double drop = F[i - off] - F[i + off];
    if (gap <= 0.0) {  // at or below the critical value: vacuous
      Ks.push_back(0.0);
      idxs.push_back(i);
      continue;
    }
    if (drop <= 0.0) continue;
    Ks.push_back(std::pow(gap, 1.0 + tau) / drop);
    idxs.push_back(i);
  }
  rec.checked = static_cast<int>(Ks.size());
  if (Ks.empty()) return rec;
  rec.K_fit = *std::max_element(Ks.begin(), Ks.end());

  std::size_t tail_start = Ks.size() - std::max<std::size_t>(Ks.size() / 4, 2);
  double kmin = 1e300, kmax = 0.0;
  for (std::size_t i = tail_start; i < Ks.size(); ++i) {
    if (Ks[i] <= 0.0) continue;
    kmin = std::min(kmin, Ks[i]);
    kmax = std::max(kmax, Ks[i]);
  }
  rec.tail_ratio = (kmin < 1e300 && kmin > 0.0) ? kmax / kmin : 1.0;

  double Khalf = rec.K_fit / 2.0;
  for (double k : Ks)
    if (k > Khalf) ++rec.failures_at_K;
  rec.pass = std::isfinite(rec.K_fit) && rec.tail_ratio <= 1.5;
  return rec;
}

UniquenessReport uniqueness_report(const std::vector<SeriesRow>& rows) {
  UniquenessReport rep;
  if (rows.size() < 3) throw std::invalid_argument("uniqueness_report: series too short");

  std::vector<std::size_t> axis_rows;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (std::isfinite(rows[i].axis_a) && std::isfinite(rows[i].dC_R)) axis_rows.push_back(i);

  // Tail = Cauchy increment over the last tenth of the observation window.
  double tail_s = rows.back().s - 0.1 * (rows.back().s - rows.front().s);
  for (std::size_t j = 1; j < axis_rows.size(); ++j) {
    const auto& p = rows[axis_rows[j - 1]];
    const auto& c = rows[axis_rows[j]];
    double step = std::hypot(c.axis_a - p.axis_a, c.axis_b - p.axis_b);
    rep.axis_total_variation += step;
    if (c.s >= tail_s) rep.axis_tv_tail += step;
  }
  if (!axis_rows.empty()) {
    const auto& last = rows[axis_rows.back()];
    rep.final_dC = last.dC_R;
    double c = std::sqrt(std::max(1.0 - last.axis_a * last.axis_a - last.axis_b * last.axis_b, 0.0));
    rep.final_axis = {last.axis_a, last.axis_b, c};
  }

  // Square-root increment sums at unit spacing in s.
  std::vector<double> Funit;
  double next = std::ceil(rows.front().s - 1e-9);
  for (const auto& r : rows) {
    if (r.s >= next - 1e-9) {
      Funit.push_back(r.F);
      next += 1.0;
    }
  }
  std::size_t tail_from = Funit.size() - std::min(Funit.size(), std::max<std::size_t>(Funit.size() / 10, 10));
  for (std::size_t j = 1; j < Funit.size(); ++j) {
    double inc = std::sqrt(std::max(Funit[j - 1] - Funit[j], 0.0));
    rep.sqrt_increment_sum += inc;
    if (j >= tail_from) rep.sqrt_increment_tail += inc;
  }

  rep.final_phi_l2 = rows.back().phi_l2;
  rep.converged = rep.final_phi_l2 <= rows.front().phi_l2;
  if (!rep.converged) rep.note = "phi norm grew over the run";
  return rep;
}

std::vector<ScaleReport> scale_compatibility_report(const std::vector<SeriesRow>& rows) {
  std::vector<ScaleReport> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double t = rows[i].s;
    double rmin = std::numeric_limits<double>::infinity();
    bool have = false;
    for (const auto& r : rows) {
      if (r.s < t - 0.5 || r.s > t + 1.0) continue;
      if (!std::isfinite(r.r_cyl)) continue;
      rmin = std::min(rmin, r.r_cyl);
      have = true;
    }
    if (!have || !(rows[i].R_shrink > 0)) continue;
    ScaleReport rep;
    rep.t = t;
    rep.r_ell = rmin;
    rep.R_shrink = rows[i].R_shrink;
    if (std::isinf(rows[i].R_shrink)) {
      rep.infinite = true;
      rep.ratio = std::numeric_limits<double>::infinity();
    } else {
      rep.ratio = rmin / rows[i].R_shrink;
    }
    out.push_back(rep);
  }
  return out;
}

double mean_value_monitor_constant(const std::vector<SeriesRow>& rows, double beta) {
  double cfit = 0.0;
  for (std::size_t a = 0; a + 2 < rows.size(); ++a) {
    double t1 = rows[a].s;
    // windows of length 2
    std::size_t bidx = a;
    while (bidx < rows.size() && rows[bidx].s < t1 + 2.0) ++bidx;
    if (bidx >= rows.size()) break;
    double drop = rows[a].F - rows[bidx].F;
    if (drop <= 0.0) continue;
    double maxphi2 = 0.0;
    for (std::size_t i = a; i <= bidx; ++i)
      if (rows[i].s >= t1 + beta)
        maxphi2 = std::max(maxphi2, rows[i].phi_l2_br * rows[i].phi_l2_br);
    cfit = std::max(cfit, maxphi2 / drop - 1.0 / beta);
  }
  return cfit;
}

}  // namespace shrinkerlab
