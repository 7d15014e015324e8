#include "shrinkerlab/graph_field.hpp"

#include <cmath>
#include <stdexcept>

#include "shrinkerlab/hermite.hpp"

namespace shrinkerlab {

double GraphField::l2_norm() const {
  double s = 0.0;
  for (double c : coeff) s += c * c;
  return std::sqrt(s);
}

GraphField& GraphField::operator+=(const GraphField& o) {
  if (o.coeff.size() != coeff.size()) throw std::invalid_argument("field size mismatch");
  for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] += o.coeff[i];
  return *this;
}

GraphField& GraphField::operator*=(double s) {
  for (double& c : coeff) c *= s;
  return *this;
}

std::vector<double> GraphField::dtheta_coeff(const std::vector<double>& c) const {
  const auto& d = *disc;
  std::vector<double> out(c.size(), 0.0);
  for (int j = 1; j <= d.jmax; ++j) {
    int tc = 2 * j - 1, ts = 2 * j;
    for (int m = 0; m <= d.M; ++m) {
      // d/dtheta cos = -j sin, d/dtheta sin = j cos
      out[d.mode_index(tc, m)] = j * c[d.mode_index(ts, m)];
      out[d.mode_index(ts, m)] = -static_cast<double>(j) * c[d.mode_index(tc, m)];
    }
  }
  return out;
}

std::vector<double> GraphField::dy_coeff(const std::vector<double>& c) const {
  const auto& d = *disc;
  std::vector<double> out(c.size(), 0.0);
  for (int tb = 0; tb < d.n_tb; ++tb)
    for (int m = 1; m <= d.M; ++m)
      out[d.mode_index(tb, m - 1)] += hermite_derivative_factor(m) * c[d.mode_index(tb, m)];
  return out;
}

namespace {

// values[i][q] = sum_{t,m} Tval(t,i) C(t,m) Hval(q,m)
std::vector<double> inverse_transform(const Discretization& d,
                                      const std::vector<double>& c,
                                      const Mat& Tval, const Mat& Hval) {
  Mat C(d.n_tb, d.M + 1);
  C.a = c;
  Mat tmp = matmul(C, transpose(Hval));     // n_tb x Npts_y
  Mat vals = matmul(transpose(Tval), tmp);  // Npts_theta x Npts_y
  return vals.a;
}

}  // namespace

std::vector<double> GraphField::nodal(int dtheta, int dy) const {
  std::vector<double> c = coeff;
  for (int a = 0; a < dtheta; ++a) c = dtheta_coeff(c);
  for (int b = 0; b < dy; ++b) c = dy_coeff(c);
  return inverse_transform(*disc, c, disc->Tval, disc->Hval);
}

std::vector<double> GraphField::nodal_at(const std::vector<double>& thetas,
                                         const std::vector<double>& ys,
                                         int dtheta, int dy) const {
  std::vector<double> c = coeff;
  for (int a = 0; a < dtheta; ++a) c = dtheta_coeff(c);
  for (int b = 0; b < dy; ++b) c = dy_coeff(c);
  Mat T = disc->theta_basis_matrix(thetas);
  Mat H = disc->hermite_basis_matrix(ys);
  return inverse_transform(*disc, c, T, H);
}

NodalPack eval_pack(const GraphField& f) {
  NodalPack p;
  p.u = f.nodal(0, 0);
  p.ut = f.nodal(1, 0);
  p.uy = f.nodal(0, 1);
  p.utt = f.nodal(2, 0);
  p.uty = f.nodal(1, 1);
  p.uyy = f.nodal(0, 2);
  window_pack(*f.disc, f.disc->y, p);
  return p;
}

void window_pack(const Discretization& d, const std::vector<double>& ys, NodalPack& p) {
  const std::size_t ny = ys.size();
  for (std::size_t idx = 0; idx < p.u.size(); ++idx) {
    if (std::abs(ys[idx % ny]) <= d.L) continue;
    p.u[idx] = p.ut[idx] = p.uy[idx] = p.utt[idx] = p.uty[idx] = p.uyy[idx] = 0.0;
  }
}

GraphField field_from_nodal(const DiscPtr& disc, const std::vector<double>& values) {
  if (values.size() != disc->n_nodes())
    throw std::invalid_argument("field_from_nodal: wrong node count");
  Mat F(disc->n_theta, disc->Q);
  F.a = values;
  Mat tmp = matmul(F, disc->Hquad);          // n_theta x (M+1)
  Mat C = matmul(disc->Tquad, tmp);          // n_tb x (M+1)
  GraphField g(disc);
  g.coeff = C.a;
  return g;
}

GraphField field_from_function(const DiscPtr& disc,
                               const std::function<double(double, double)>& f) {
  std::vector<double> vals(disc->n_nodes());
  for (int i = 0; i < disc->n_theta; ++i)
    for (int q = 0; q < disc->Q; ++q)
      vals[disc->node_index(i, q)] = f(disc->theta[i], disc->y[q]);
  return field_from_nodal(disc, vals);
}

GraphField unit_mode(const DiscPtr& disc, int j, int m, int parity) {
  if (m > disc->M) throw std::invalid_argument("unit_mode: Hermite degree beyond cap");
  GraphField g(disc);
  g.at(j, m, parity) = 1.0;
  return g;
}

GraphField tapered_mode(const DiscPtr& disc, int j, int m, int parity) {
  GraphField pure = unit_mode(disc, j, m, parity);
  auto vals = pure.nodal();
  for (int i = 0; i < disc->n_theta; ++i)
    for (int q = 0; q < disc->Q; ++q)
      vals[disc->node_index(i, q)] *= disc->taper(disc->y[q]);
  GraphField g = field_from_nodal(disc, vals);
  double nrm = g.l2_norm();
  if (nrm > 0) g *= 1.0 / nrm;
  return g;
}

}  // namespace shrinkerlab
