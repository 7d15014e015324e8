#include "shrinkerlab/cylinder.hpp"

#include <cmath>
#include <stdexcept>

namespace shrinkerlab {

namespace {
double column_dot(const std::vector<double>& frame, int dim, int c1, int c2) {
  double s = 0.0;
  for (int r = 0; r < dim; ++r) s += frame[r * dim + c1] * frame[r * dim + c2];
  return s;
}
}  // namespace

double CylinderSpec::radius() const { return std::sqrt(2.0 * k); }

std::vector<double> CylinderSpec::frame_column(int c) const {
  int dim = dim_ambient();
  std::vector<double> v(dim);
  for (int r = 0; r < dim; ++r) v[r] = frame[r * dim + c];
  return v;
}

std::vector<double> CylinderSpec::sphere_component(const std::vector<double>& p) const {
  int dim = dim_ambient();
  std::vector<double> out(dim, 0.0);
  for (int c = 0; c <= k; ++c) {
    double proj = 0.0;
    for (int r = 0; r < dim; ++r) proj += p[r] * frame[r * dim + c];
    for (int r = 0; r < dim; ++r) out[r] += proj * frame[r * dim + c];
  }
  return out;
}

double CylinderSpec::axis_coordinate(const std::vector<double>& p, int i) const {
  int dim = dim_ambient();
  int c = k + 1 + i;
  double proj = 0.0;
  for (int r = 0; r < dim; ++r) proj += p[r] * frame[r * dim + c];
  return proj;
}

std::vector<double> CylinderSpec::normal_at(const std::vector<double>& p) const {
  auto ps = sphere_component(p);
  double nrm = 0.0;
  for (double v : ps) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm < 1e-14) throw std::domain_error("normal undefined on the axis");
  for (double& v : ps) v /= nrm;
  return ps;
}

std::vector<std::vector<double>> CylinderSpec::tangent_frame(const std::vector<double>& p) const {
  int dim = dim_ambient();
  auto nrm = normal_at(p);

  // Drop the sphere-plane basis column most aligned with the normal, then
  // Gram-Schmidt the remaining k columns against the normal.
  int drop = 0;
  double best = -1.0;
  std::vector<double> proj(k + 1, 0.0);
  for (int c = 0; c <= k; ++c) {
    double d = 0.0;
    for (int r = 0; r < dim; ++r) d += nrm[r] * frame[r * dim + c];
    proj[c] = d;
    if (std::abs(d) > best) {
      best = std::abs(d);
      drop = c;
    }
  }

  std::vector<std::vector<double>> out;
  out.reserve(n);
  for (int c = 0; c <= k; ++c) {
    if (c == drop) continue;
    auto v = frame_column(c);
    for (int r = 0; r < dim; ++r) v[r] -= proj[c] * nrm[r];
    for (const auto& w : out) {
      double d = 0.0;
      for (int r = 0; r < dim; ++r) d += v[r] * w[r];
      for (int r = 0; r < dim; ++r) v[r] -= d * w[r];
    }
    double nv = 0.0;
    for (double x : v) nv += x * x;
    nv = std::sqrt(nv);
    if (nv < 1e-12) throw std::domain_error("degenerate tangent frame");
    for (double& x : v) x /= nv;
    out.push_back(std::move(v));
  }
  for (int c = k + 1; c < dim; ++c) out.push_back(frame_column(c));
  return out;
}

double CylinderSpec::distance_to_axis(const std::vector<double>& p) const {
  auto ps = sphere_component(p);
  double s = 0.0;
  for (double v : ps) s += v * v;
  return std::sqrt(s);
}

void CylinderSpec::validate() const {
  if (k < 1 || k > n) throw std::invalid_argument("CylinderSpec: need 1 <= k <= n");
  int dim = dim_ambient();
  if (frame.size() != std::size_t(dim) * dim)
    throw std::invalid_argument("CylinderSpec: frame must be (n+1)x(n+1)");
  for (int c1 = 0; c1 < dim; ++c1)
    for (int c2 = c1; c2 < dim; ++c2) {
      double d = column_dot(frame, dim, c1, c2) - (c1 == c2 ? 1.0 : 0.0);
      if (std::abs(d) > 1e-12)
        throw std::invalid_argument("CylinderSpec: frame columns not orthonormal");
    }
}

CylinderSpec standard_cylinder(int k, int n) {
  CylinderSpec c;
  c.k = k;
  c.n = n;
  int dim = n + 1;
  c.frame.assign(std::size_t(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) c.frame[i * dim + i] = 1.0;
  c.validate();
  return c;
}

CylinderSpec cylinder_with_axis(const Vec3& axis) {
  Vec3 a = normalized(axis);
  // Pick the seed least aligned with the axis to build the sphere plane.
  Vec3 seed = std::abs(a[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 e1 = normalized(seed - dot(seed, a) * a);
  Vec3 e2 = cross(a, e1);
  CylinderSpec c;
  c.k = 1;
  c.n = 2;
  c.frame = {e1[0], e2[0], a[0],
             e1[1], e2[1], a[1],
             e1[2], e2[2], a[2]};
  c.validate();
  return c;
}

ShapeOperator cylinder_shape_operator(const CylinderSpec& cyl, const std::vector<double>& p) {
  double r = cyl.radius();
  double dist = cyl.distance_to_axis(p);
  if (std::abs(dist - r) > 1e-10)
    throw std::domain_error("cylinder_shape_operator: point off the cylinder");
  ShapeOperator s;
  s.n = cyl.n;
  s.a.assign(std::size_t(cyl.n) * cyl.n, 0.0);
  const double curv = -1.0 / r;  // sphere principal curvature, our orientation
  for (int i = 0; i < cyl.k; ++i) s.a[i * cyl.n + i] = curv;
  s.H = r / 2.0;  // k/sqrt(2k) = sqrt(2k)/2, written to cancel exactly vs eta/2
  s.A_norm2 = 0.5;
  return s;
}

double cylinder_phi(const CylinderSpec& cyl, const std::vector<double>& p) {
  auto n = cyl.normal_at(p);
  double xn = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) xn += p[i] * n[i];
  return 0.5 * xn - cyl.radius() / 2.0;
}

OffsetJet eval_offset_jet(const CylinderSpec& cyl, const std::vector<double>& p,
                          double s, const std::vector<double>& y) {
  double r = cyl.radius();
  if (std::abs(cyl.distance_to_axis(p) - r) > 1e-10)
    throw std::domain_error("eval_offset_jet: point off the cylinder");
  if (std::abs(s) >= r)
    throw std::domain_error("eval_offset_jet: |s| beyond the normal injectivity bound");
  if (static_cast<int>(y.size()) != cyl.n)
    throw std::invalid_argument("eval_offset_jet: tangent vector must have n components");

  OffsetJet jet;
  jet.b_diag.assign(cyl.n, 1.0);
  double bs = 1.0 + s / r;  // B = Id - s A, sphere eigenvalue of A is -1/r
  for (int i = 0; i < cyl.k; ++i) jet.b_diag[i] = bs;

  double binv_y2 = 0.0;
  for (int i = 0; i < cyl.n; ++i) {
    double v = y[i] / jet.b_diag[i];
    binv_y2 += v * v;
  }
  jet.w = std::sqrt(1.0 + binv_y2);

  double det = 1.0;
  for (int i = 0; i < cyl.n; ++i) det *= jet.b_diag[i];
  jet.nu = jet.w * det;

  // <p, B^{-1} y>: sphere-tangent components of p vanish, axis components are
  // the axis coordinates and B acts as the identity there.
  double p_binv_y = 0.0;
  for (int i = cyl.k; i < cyl.n; ++i)
    p_binv_y += cyl.axis_coordinate(p, i - cyl.k) * y[i];
  jet.eta = (r + s - p_binv_y) / jet.w;
  return jet;
}

OffsetTaylor taylor_coefficients(const CylinderSpec& cyl, const std::vector<double>& p) {
  double r = cyl.radius();
  if (std::abs(cyl.distance_to_axis(p) - r) > 1e-10)
    throw std::domain_error("taylor_coefficients: point off the cylinder");
  int n = cyl.n;
  OffsetTaylor t;
  t.dw_dy.assign(n, 0.0);
  t.d2w_dydy.assign(std::size_t(n) * n, 0.0);
  t.d2nu_dydy.assign(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    t.d2w_dydy[i * n + i] = 1.0;
    t.d2nu_dydy[i * n + i] = 1.0;
  }
  double H = r / 2.0;
  t.dnu_ds = H;
  t.d2nu_ds2 = H * H - 0.5;  // H^2 - |A|^2 = (k-1)/2
  t.dnu_dp_ds.assign(n, 0.0);
  t.eta0 = r;
  t.deta_ds = 1.0;
  t.deta_dy.assign(n, 0.0);
  for (int i = cyl.k; i < n; ++i) t.deta_dy[i] = -cyl.axis_coordinate(p, i - cyl.k);
  return t;
}

double radial_mean_curvature(int k, double s) { return k / (std::sqrt(2.0 * k) + s); }

double radial_area_ratio(int k, double s) {
  return std::pow(1.0 + s / std::sqrt(2.0 * k), k);
}

double radial_support(int k, double s) { return std::sqrt(2.0 * k) + s; }

double radial_gradient_M(int k, double s) {
  double r = std::sqrt(2.0 * k);
  double nu = radial_area_ratio(k, s);
  double hu = radial_mean_curvature(k, s);
  double eta = radial_support(k, s);
  return nu * (hu - 0.5 * eta) * std::exp(-(2.0 * r * s + s * s) / 4.0);
}

double radial_gaussian_area(int k, int n, double r) {
  // (4 pi)^{-n/2} |S^k| r^k e^{-r^2/4} (2 sqrt(pi))^{n-k}
  double omega_k = 2.0 * std::pow(M_PI, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
  return std::pow(4.0 * M_PI, -0.5 * n) * omega_k * std::pow(r, k) *
         std::exp(-r * r / 4.0) * std::pow(2.0 * std::sqrt(M_PI), n - k);
}

}  // namespace shrinkerlab
