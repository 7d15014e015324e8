#include <doctest.h>

#include <cmath>
#include <random>

#include "shrinkerlab/harness.hpp"
#include "shrinkerlab/spectral.hpp"

using namespace shrinkerlab;

namespace {
DiscPtr disc() {
  static DiscPtr d = make_discretization(32, 24, 12.0);
  return d;
}

SurfaceSample rotated_cylinder_sample(double angle) {
  GraphField u(disc());
  SurfaceSample s = embed_graph(u);
  double c = std::cos(angle), sn = std::sin(angle);
  for (auto& x : s.x) x = Vec3{c * x[0] + sn * x[2], x[1], -sn * x[0] + c * x[2]};
  for (auto& n : s.nrm) n = Vec3{c * n[0] + sn * n[2], n[1], -sn * n[0] + c * n[2]};
  return s;
}
}  // namespace

TEST_CASE("fit recovers a rotated exact cylinder") {
  double ang = 0.3;
  SurfaceSample s = rotated_cylinder_sample(ang);
  CylinderFit fit = fit_cylinder(s, 9.0);
  Vec3 expect{std::sin(ang), 0.0, std::cos(ang)};
  if (expect[2] < 0) expect = -1.0 * expect;
  double align = std::abs(dot(fit.axis, expect));
  CHECK(align == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(fit.d < 1e-6);
}

TEST_CASE("fit distance is rotation invariant") {
  GraphField u = tapered_mode(disc(), 0, 2);
  u *= 0.03;
  SurfaceSample s = embed_graph(u);
  CylinderFit f0 = fit_cylinder(s, 9.0);
  double ang = 0.45;
  double c = std::cos(ang), sn = std::sin(ang);
  for (auto& x : s.x) x = Vec3{c * x[0] + sn * x[2], x[1], -sn * x[0] + c * x[2]};
  for (auto& n : s.nrm) n = Vec3{c * n[0] + sn * n[2], n[1], -sn * n[0] + c * n[2]};
  CylinderFit f1 = fit_cylinder(s, 9.0);
  CHECK(f1.d == doctest::Approx(f0.d).epsilon(1e-8));
}

TEST_CASE("quadratic perturbation: distance is linear, axis unchanged") {
  double eps = 0.01;
  GraphField u = field_from_function(disc(), [&](double, double y) {
    return eps * (y * y - 2.0) * disc()->taper(y);
  });
  SurfaceSample s = embed_graph(u);
  double R = 9.0;
  CylinderFit fit = fit_cylinder(s, R);
  CHECK(std::abs(fit.axis[2]) == doctest::Approx(1.0).epsilon(1e-6));
  // oracle: eps * Gaussian L2 norm of (y^2 - 2) over B_R
  GraphField shape = field_from_function(disc(), [&](double, double y) {
    return (y * y - 2.0) * disc()->taper(y);
  });
  double expect = eps * gaussian_norm(shape, NormKind::L2, R);
  CHECK(fit.d == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("rotation kernel mode tilts the fitted axis at first order") {
  std::vector<double> epss = {0.01, 0.02, 0.04}, dists, tilts;
  for (double eps : epss) {
    GraphField u = field_from_function(disc(), [&](double th, double y) {
      return eps * y * std::cos(th) * disc()->taper(y);
    });
    SurfaceSample s = embed_graph(u);
    CylinderFit fit = fit_cylinder(s, 9.0);
    tilts.push_back(std::hypot(fit.axis_a, fit.axis_b));
    dists.push_back(fit.d);
  }
  // tilt ~ c * eps
  CHECK(tilts[2] / tilts[0] == doctest::Approx(4.0).epsilon(0.15));
  // residual distance ~ eps^2: slope 2 +- 0.1 over the sweep
  double slope = std::log(dists[2] / dists[0]) / std::log(epss[2] / epss[0]);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("cylindrical scale: capped on the cylinder, shrinks with amplitude") {
  GraphField zero(disc());
  SurfaceSample s0 = embed_graph(zero);
  CylinderFit f0 = fit_cylinder(s0, 9.0);
  auto cs0 = cylindrical_scale(s0, f0);
  CHECK(cs0.capped);
  CHECK(cs0.r == doctest::Approx(std::sqrt(12.0 * 12.0 + 2.0)));

  auto r_at = [&](double eps) {
    GraphField u = field_from_function(disc(), [&](double, double y) {
      return eps * (y * y - 2.0) * disc()->taper(y);
    });
    SurfaceSample s = embed_graph(u);
    CylinderFit fit = fit_cylinder(s, 9.0, {});
    return cylindrical_scale(s, fit, 0.05).r;
  };
  double r1 = r_at(0.002), r2 = r_at(0.004), r3 = r_at(0.008);
  CHECK(r1 > r2);
  CHECK(r2 > r3);
  // |u| <= eps0 forces |y| <~ sqrt(eps0/eps)
  CHECK(r2 == doctest::Approx(std::sqrt(0.05 / 0.004)).epsilon(0.25));
}

TEST_CASE("shrinker scale inverts the F drop") {
  CHECK(shrinker_scale(1.0, 1.0 - std::exp(-8.0)).R == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(shrinker_scale(1.0, 1.0 - std::exp(-2.0)).R == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(shrinker_scale(1.0, 1.0).infinite);
  CHECK_THROWS(shrinker_scale(1.0, 1.1));
}

TEST_CASE("exponent fit recovers power laws") {
  std::vector<double> xs, ys, yn;
  std::mt19937_64 rng(5);
  auto uni = [&]() { return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0; };
  for (int i = 0; i < 12; ++i) {
    double x = std::pow(10.0, -2.0 + 2.0 * i / 11.0);
    xs.push_back(x);
    ys.push_back(x * x);
    yn.push_back(3.0 * std::pow(x, 1.5) * (1.0 + 0.01 * uni()));
  }
  auto f1 = exponent_fit(xs, ys);
  CHECK(f1.slope == doctest::Approx(2.0).epsilon(1e-9));
  auto f2 = exponent_fit(xs, yn);
  CHECK(f2.slope > 1.45);
  CHECK(f2.slope < 1.55);
  CHECK_THROWS(exponent_fit({1.0, 1.1, 1.2, 1.3}, {1, 1, 1, 1}));  // no decade span
}

TEST_CASE("lojasiewicz reports on epsilon families") {
  // Kernel-direction family: d^2 ~ eps^2 and phi ~ eps^2 (slope 1);
  // orthogonal family: d^2 ~ eps^2 and phi ~ eps (slope 2).
  std::vector<FamilyPoint> kernel_fam, orth_fam;
  for (double eps : {1e-3, 2e-3, 4e-3, 8e-3, 1.6e-2, 3.2e-2}) {
    FamilyPoint p;
    p.eps = eps;
    p.d2 = 0.8 * eps * eps;
    p.phi_l1 = 2.0 * eps * eps;
    p.phi_l2 = 2.0 * eps * eps;
    p.f_gap = 0.3 * eps * eps * eps;
    p.grad_norm = 2.0 * eps * eps;
    kernel_fam.push_back(p);
    p.phi_l1 = 1.5 * eps;
    p.phi_l2 = 1.5 * eps;
    p.f_gap = 0.7 * eps * eps;
    p.grad_norm = 1.5 * eps;
    orth_fam.push_back(p);
  }
  auto k1 = first_lojasiewicz_report(kernel_fam, 8.0, "kernel");
  CHECK(k1.fitted_exponent == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(k1.pass);
  auto o1 = first_lojasiewicz_report(orth_fam, 8.0, "orthogonal");
  CHECK(o1.fitted_exponent == doctest::Approx(2.0).epsilon(1e-6));
  auto k2 = gradient_lojasiewicz_report(kernel_fam, 8.0, "kernel");
  CHECK(k2.fitted_exponent == doctest::Approx(1.5).epsilon(1e-6));
  auto o2 = gradient_lojasiewicz_report(orth_fam, 8.0, "orthogonal");
  CHECK(o2.fitted_exponent == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("discrete flow inequality on a synthetic power-decay run") {
  // F(t) - Fc = (5+t)^{-3} decays like the slow kernel dynamics.
  std::vector<double> ts, Fs;
  double Fc = 1.5;
  for (int i = 0; i <= 400; ++i) {
    double t = 0.1 * i;
    ts.push_back(t);
    Fs.push_back(Fc + std::pow(5.0 + t, -3.0));
  }
  auto rec = discrete_flow_inequality(ts, Fs, Fc, 0.5, 5.0);
  CHECK(rec.checked > 100);
  CHECK(std::isfinite(rec.K_fit));
  CHECK(rec.pass);
  CHECK(rec.failures_at_K >= 1);  // halving the constant breaks the fit
  // vacuous on the exact critical value
  std::vector<double> Fs0(ts.size(), Fc);
  auto rec0 = discrete_flow_inequality(ts, Fs0, Fc, 0.5, 5.0);
  CHECK(rec0.K_fit == 0.0);
}

TEST_CASE("uniqueness report totals on a synthetic convergent run") {
  std::vector<SeriesRow> rows;
  for (int i = 0; i <= 600; ++i) {
    double t = 0.1 * i;
    SeriesRow r;
    r.step = i;
    r.s = t;
    r.F = 1.5 + std::pow(3.0 + t, -3.0);
    r.phi_l2 = std::pow(3.0 + t, -2.0);
    r.axis_a = 0.02 + 0.01 / (1.0 + t);
    r.axis_b = 0.0;
    r.dC_R = std::pow(3.0 + t, -1.5);
    rows.push_back(r);
  }
  auto rep = uniqueness_report(rows);
  CHECK(rep.converged);
  CHECK(rep.axis_total_variation == doctest::Approx(0.01 * (1.0 - 1.0 / 61.0)).epsilon(1e-6));
  CHECK(rep.axis_tv_tail < rep.axis_total_variation / 2.0);
  CHECK(rep.sqrt_increment_sum > 0.0);
  CHECK(rep.sqrt_increment_tail < rep.sqrt_increment_sum);
  CHECK(rep.final_phi_l2 == doctest::Approx(std::pow(63.0, -2.0)));
}

TEST_CASE("scale compatibility over a synthetic tail") {
  std::vector<SeriesRow> rows;
  for (int i = 0; i <= 300; ++i) {
    double t = 0.1 * i;
    SeriesRow r;
    r.s = t;
    r.F = 1.5 + std::pow(4.0 + t, -3.0);
    r.r_cyl = 11.0;
    rows.push_back(r);
  }
  // fill shrinker scales from unit windows
  for (std::size_t i = 10; i + 10 < rows.size(); ++i)
    rows[i].R_shrink = shrinker_scale(rows[i - 10].F, rows[i + 10].F).R;
  auto reps = scale_compatibility_report(rows);
  CHECK(!reps.empty());
  int increasing = 0;
  for (std::size_t i = 1; i < reps.size(); ++i)
    if (reps[i].ratio >= reps[i - 1].ratio) ++increasing;
  // drops shrink, R_shrink grows, so the ratio r_ell/R falls -- here r_ell is
  // constant, so ratio decreases; just check values are sane and finite.
  for (const auto& r : reps) {
    CHECK(r.r_ell == 11.0);
    if (r.infinite) continue;  // vacuous rows: shrinker scale underflowed
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 1.0);
  }
  (void)increasing;
}

TEST_CASE("mean value monitor produces a finite constant") {
  std::vector<SeriesRow> rows;
  for (int i = 0; i <= 300; ++i) {
    double t = 0.1 * i;
    SeriesRow r;
    r.s = t;
    r.F = 1.5 + std::exp(-t);
    r.phi_l2_br = std::exp(-0.5 * t);
    rows.push_back(r);
  }
  double C = mean_value_monitor_constant(rows, 0.25);
  CHECK(std::isfinite(C));
}

TEST_CASE("distance to cylinders is monotone in the ball radius") {
  GraphField u = tapered_mode(disc(), 0, 2);
  u *= 0.02;
  SurfaceSample s = embed_graph(u);
  double prev = 0.0;
  for (double R : {4.0, 6.0, 8.0, 10.0}) {
    double d = fit_cylinder(s, R, {}).d;
    CHECK(d >= prev - 1e-12);
    prev = d;
  }
}

TEST_CASE("cylindrical scale collapses or flags for non-graphical fits") {
  GraphField u(disc());
  SurfaceSample s = embed_graph(u);
  CylinderFit crossways;
  crossways.axis = {1.0, 0.0, 0.0};  // perpendicular to the true axis
  auto cs = cylindrical_scale(s, crossways);
  // the surface misses B_1 entirely (|x| >= sqrt 2), so the constraint bites
  // exactly where the first crossways-non-graphical node appears
  CHECK(cs.r < 1.5);

  // shrink the sample into B_1: now it is non-graphical already at R = 1
  SurfaceSample small = s;
  for (auto& x : small.x) x = 0.5 * x;
  auto cs2 = cylindrical_scale(small, crossways);
  CHECK(!cs2.graphical);
  CHECK(cs2.r == 0.0);
}

TEST_CASE("reports on the exact critical point pass vacuously") {
  std::vector<FamilyPoint> fam(5);
  for (int i = 0; i < 5; ++i) {
    fam[i].eps = 0.01 * (i + 1);
    fam[i].d2 = 0.0;
    fam[i].f_gap = 0.0;
    fam[i].phi_l1 = fam[i].phi_l2 = fam[i].grad_norm = 0.0;
  }
  CHECK(first_lojasiewicz_report(fam, 8.0, "cylinder").pass);
  CHECK(gradient_lojasiewicz_report(fam, 8.0, "cylinder").pass);
}

TEST_CASE("uniqueness report on a stationary run is all zeros") {
  std::vector<SeriesRow> rows(30);
  for (int i = 0; i < 30; ++i) {
    rows[i].step = i;
    rows[i].s = 0.1 * i;
    rows[i].F = 1.52;
    rows[i].phi_l2 = 0.0;
    rows[i].axis_a = 0.0;
    rows[i].axis_b = 0.0;
    rows[i].dC_R = 0.0;
  }
  auto rep = uniqueness_report(rows);
  CHECK(rep.axis_total_variation == 0.0);
  CHECK(rep.sqrt_increment_sum == 0.0);
  CHECK(rep.final_phi_l2 == 0.0);
  CHECK(rep.converged);
}

TEST_CASE("fitted exponents are refinement-stable") {
  auto slope_at = [&](DiscPtr d) {
    double Fc = 0.0;
    {
      GraphField zero(d);
      Fc = f_functional(zero);
    }
    std::vector<double> gn, gap;
    GraphField v = tapered_mode(d, 0, 2);
    for (double e : {0.02, 0.01, 0.005, 0.0025, 0.00125}) {
      GraphField u = v;
      u *= e;
      SurfaceSample s = embed_graph(u);
      gap.push_back(std::abs(f_functional(s) - Fc));
      gn.push_back(field_from_nodal(d, gradient_M(u)).l2_norm());
    }
    return exponent_fit(gn, gap).slope;
  };
  double s1 = slope_at(make_discretization(24, 20, 12.0));
  double s2 = slope_at(make_discretization(48, 40, 12.0));
  CHECK(std::abs(s1 - s2) < 0.02);
}
