#include <doctest.h>

#include <cmath>

#include "shrinkerlab/cylinder.hpp"

using namespace shrinkerlab;

TEST_CASE("shape operator on the k=1 circle matches the parametric oracle") {
  // Oracle: second derivative of the arclength parametrization of the circle
  // of radius sqrt(2), dotted with the outward normal.
  const double r = std::sqrt(2.0);
  auto gamma = [&](double t) { return Vec3{r * std::cos(t / r), r * std::sin(t / r), 0.0}; };
  const double h = 1e-3, t0 = 0.37;
  Vec3 dd = (1.0 / (h * h)) * (gamma(t0 + h) - 2.0 * gamma(t0) + gamma(t0 - h));
  Vec3 nrm{std::cos(t0 / r), std::sin(t0 / r), 0.0};
  double a_oracle = dot(dd, nrm);  // = -1/sqrt(2)

  CylinderSpec cyl = standard_cylinder(1, 2);
  std::vector<double> p = {r * std::cos(t0 / r), r * std::sin(t0 / r), 1.3};
  auto s = cylinder_shape_operator(cyl, p);
  CHECK(s.a[0] == doctest::Approx(a_oracle).epsilon(1e-6));
  CHECK(s.a[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(s.a[3] == 0.0);
  CHECK(s.H == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("k=2 sphere factor gives H = 1 and the shrinker identity") {
  CylinderSpec cyl = standard_cylinder(2, 3);
  std::vector<double> p = {2.0, 0.0, 0.0, -0.4};
  auto s = cylinder_shape_operator(cyl, p);
  CHECK(s.H == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.A_norm2 == doctest::Approx(0.5));
  CHECK(cylinder_phi(cyl, p) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("off-cylinder points are rejected") {
  CylinderSpec cyl = standard_cylinder(1, 2);
  CHECK_THROWS_AS(cylinder_shape_operator(cyl, {1.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("offset jets: radial closed forms and w(p,s,0) = 1") {
  CylinderSpec cyl = standard_cylinder(1, 2);
  std::vector<double> p = {std::sqrt(2.0), 0.0, 2.1};
  for (double s : {-0.8, -0.2, 0.0, 0.5, 1.2}) {
    auto jet = eval_offset_jet(cyl, p, s, {0.0, 0.0});
    CHECK(jet.w == 1.0);
    CHECK(jet.nu == doctest::Approx(1.0 + s / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(jet.eta == doctest::Approx(std::sqrt(2.0) + s).epsilon(1e-15));
  }
  CHECK_THROWS_AS(eval_offset_jet(cyl, p, 1.5, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("taylor coefficients match central finite differences at O(h^2)") {
  CylinderSpec cyl = standard_cylinder(1, 2);
  std::vector<double> p = {std::sqrt(2.0), 0.0, -1.7};
  auto tc = taylor_coefficients(cyl, p);
  CHECK(tc.dnu_ds == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(tc.d2nu_ds2 == doctest::Approx(0.0));  // k/2 - 1/2 at k = 1
  CHECK(tc.eta0 == doctest::Approx(std::sqrt(2.0)));
  CHECK(tc.deta_dy[0] == 0.0);
  CHECK(tc.deta_dy[1] == doctest::Approx(1.7));  // -axis coordinate

  auto jet = [&](double s, double y1, double y2) { return eval_offset_jet(cyl, p, s, {y1, y2}); };
  auto fd_err = [&](double h) {
    double e = 0.0;
    e = std::max(e, std::abs((jet(h, 0, 0).nu - jet(-h, 0, 0).nu) / (2 * h) - tc.dnu_ds));
    e = std::max(e, std::abs((jet(h, 0, 0).nu - 2 * jet(0, 0, 0).nu + jet(-h, 0, 0).nu) / (h * h) -
                             tc.d2nu_ds2));
    e = std::max(e, std::abs((jet(0, h, 0).w - 2 * jet(0, 0, 0).w + jet(0, -h, 0).w) / (h * h) -
                             tc.d2w_dydy[0]));
    e = std::max(e, std::abs((jet(0, h, 0).nu - 2 * jet(0, 0, 0).nu + jet(0, -h, 0).nu) / (h * h) -
                             tc.d2nu_dydy[0]));
    e = std::max(e, std::abs((jet(0, 0, h).eta - jet(0, 0, -h).eta) / (2 * h) - tc.deta_dy[1]));
    e = std::max(e, std::abs((jet(h, 0, 0).eta - jet(-h, 0, 0).eta) / (2 * h) - tc.deta_ds));
    e = std::max(e, std::abs((jet(h, 0, 0).w - jet(-h, 0, 0).w) / (2 * h) - tc.dw_ds));
    return e;
  };
  // Second-order convergence of the difference quotients to the closed forms.
  double e1 = fd_err(1e-2), e2 = fd_err(5e-3);
  CHECK(e1 < 1e-3);
  CHECK(e2 < e1 / 3.0);
}

TEST_CASE("k=2 taylor coefficients: d2nu/ds2 = H^2 - |A|^2 = 1/2") {
  CylinderSpec cyl = standard_cylinder(2, 3);
  std::vector<double> p = {2.0, 0.0, 0.0, 0.9};
  auto tc = taylor_coefficients(cyl, p);
  CHECK(tc.dnu_ds == doctest::Approx(1.0));
  CHECK(tc.d2nu_ds2 == doctest::Approx(0.5));
  auto jet = [&](double s) { return eval_offset_jet(cyl, p, s, {0.0, 0.0, 0.0}); };
  double h = 1e-3;
  double fd2 = (jet(h).nu - 2 * jet(0).nu + jet(-h).nu) / (h * h);
  CHECK(fd2 == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("rotated frames keep every closed-form identity") {
  // Cylinder in R^3 tilted by 0.3 rad about e2.
  double a = 0.3;
  Vec3 axis{std::sin(a), 0.0, std::cos(a)};
  CylinderSpec cyl = cylinder_with_axis(axis);
  cyl.validate();
  // A point on the rotated cylinder: sphere-plane column 0 scaled to radius,
  // plus an axis offset.
  auto c0 = cyl.frame_column(0);
  auto c2 = cyl.frame_column(2);
  std::vector<double> p(3);
  for (int i = 0; i < 3; ++i) p[i] = std::sqrt(2.0) * c0[i] + 0.8 * c2[i];
  CHECK(cylinder_phi(cyl, p) == doctest::Approx(0.0).epsilon(1e-13));
  auto s = cylinder_shape_operator(cyl, p);
  CHECK(s.H == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
  auto frame = cyl.tangent_frame(p);
  CHECK(frame.size() == 2);
  // Tangent vectors are orthonormal and orthogonal to the normal.
  auto nn = cyl.normal_at(p);
  for (const auto& v : frame) {
    double vn = 0.0, vv = 0.0;
    for (int i = 0; i < 3; ++i) {
      vn += v[i] * nn[i];
      vv += v[i] * v[i];
    }
    CHECK(std::abs(vn) < 1e-12);
    CHECK(vv == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("radial area family peaks at r = sqrt(2k)") {
  for (int k : {1, 2}) {
    int n = k + 1;
    double rstar = std::sqrt(2.0 * k);
    double f0 = radial_gaussian_area(k, n, rstar);
    CHECK(f0 > radial_gaussian_area(k, n, rstar * 1.01));
    CHECK(f0 > radial_gaussian_area(k, n, rstar * 0.99));
  }
  CHECK(radial_gaussian_area(1, 2, std::sqrt(2.0)) ==
        doctest::Approx(std::sqrt(M_PI) * std::sqrt(2.0) * std::exp(-0.5)).epsilon(1e-15));
}

TEST_CASE("round shrinking sphere: constant closed forms kill the traced identity") {
  // S^2_2 in R^3 is the k = n = 2 case: H = 1, |A|^2 = 1/2, phi = 0, and the
  // traced identity L H - H + Lap phi + phi |A|^2 vanishes termwise.
  CylinderSpec sphere = standard_cylinder(2, 2);
  std::vector<double> p = {0.0, 2.0, 0.0};
  auto s = cylinder_shape_operator(sphere, p);
  CHECK(s.H == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.A_norm2 == doctest::Approx(0.5));
  double phi = cylinder_phi(sphere, p);
  CHECK(std::abs(phi) < 1e-13);
  // constants: Lap H = 0, drift = 0, so L H = (|A|^2 + 1/2) H
  double LH = (s.A_norm2 + 0.5) * s.H;
  double residual = LH - s.H + 0.0 + phi * s.A_norm2;
  CHECK(std::abs(residual) < 1e-13);
}
