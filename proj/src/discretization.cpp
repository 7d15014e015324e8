#include "shrinkerlab/discretization.hpp"

#include <cmath>
#include <stdexcept>

#include "shrinkerlab/hermite.hpp"

namespace shrinkerlab {

int Discretization::theta_basis_index(int j, int parity) const {
  if (j == 0) {
    if (parity != 0) throw std::invalid_argument("j=0 has no sin branch");
    return 0;
  }
  if (j > jmax) throw std::invalid_argument("circle frequency beyond grid");
  return 2 * j - 1 + parity;
}

double Discretization::eigenvalue(int tb, int m) const {
  double j = mode_j[tb];
  return 1.0 - j * j / (2.0 * k) - 0.5 * m;
}

double Discretization::taper(double yv) const {
  const double t0 = taper_start_frac * L;
  double a = std::abs(yv);
  if (a <= t0) return 1.0;
  if (a >= L) return 0.0;
  double t = (a - t0) / (L - t0);
  auto g = [](double s) { return std::exp(-1.0 / s); };
  return g(1.0 - t) / (g(t) + g(1.0 - t));
}

Mat Discretization::theta_basis_matrix(const std::vector<double>& thetas) const {
  const double circle_norm = 2.0 * M_PI * radius * std::exp(-radius * radius / 4.0);
  const double c0 = 1.0 / std::sqrt(circle_norm);
  const double cj = 1.0 / std::sqrt(circle_norm / 2.0);
  Mat T(n_tb, thetas.size());
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    T(0, i) = c0;
    for (int j = 1; j <= jmax; ++j) {
      T(2 * j - 1, i) = cj * std::cos(j * thetas[i]);
      T(2 * j, i) = cj * std::sin(j * thetas[i]);
    }
  }
  return T;
}

Mat Discretization::hermite_basis_matrix(const std::vector<double>& ys) const {
  Mat H(ys.size(), M + 1);
  for (std::size_t q = 0; q < ys.size(); ++q) {
    auto h = hermite_values(M, ys[q]);
    for (int m = 0; m <= M; ++m) H(q, m) = h[m];
  }
  return H;
}

DiscPtr make_discretization(int n_theta, int M, double L, int q) {
  if (n_theta < 4 || n_theta % 2 != 0)
    throw std::invalid_argument("n_theta must be even and >= 4");
  if (M < 2) throw std::invalid_argument("need Hermite cap M >= 2");
  if (q < 0) q = 2 * M + 1;
  if (q < M + 1) throw std::invalid_argument("quadrature nodes must exceed Hermite cap");

  auto d = std::make_shared<Discretization>();
  d->n_theta = n_theta;
  d->M = M;
  d->Q = q;
  d->L = L;
  d->radius = std::sqrt(2.0 * d->k);
  d->jmax = n_theta / 2 - 1;
  d->n_tb = 2 * d->jmax + 1;

  d->theta.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) d->theta[i] = 2.0 * M_PI * i / n_theta;

  auto rule = gauss_hermite_rule(q);
  d->y = rule.nodes;
  d->yw = rule.weights;
  d->y_in_window.resize(q);
  for (int i = 0; i < q; ++i) d->y_in_window[i] = std::abs(d->y[i]) <= L ? 1 : 0;

  const double cw = d->radius * std::exp(-d->radius * d->radius / 4.0) * (2.0 * M_PI / n_theta);
  d->circle_w.assign(n_theta, cw);

  d->Tval = d->theta_basis_matrix(d->theta);
  d->Tquad = d->Tval;
  for (int t = 0; t < d->n_tb; ++t)
    for (int i = 0; i < n_theta; ++i) d->Tquad(t, i) *= d->circle_w[i];

  d->Hval = d->hermite_basis_matrix(d->y);
  d->Hquad = d->Hval;
  for (int qi = 0; qi < q; ++qi)
    for (int m = 0; m <= M; ++m) d->Hquad(qi, m) *= d->yw[qi];

  d->mode_j.resize(d->n_tb);
  d->mode_parity.resize(d->n_tb);
  d->mode_j[0] = 0;
  d->mode_parity[0] = 0;
  for (int j = 1; j <= d->jmax; ++j) {
    d->mode_j[2 * j - 1] = j;
    d->mode_parity[2 * j - 1] = 0;
    d->mode_j[2 * j] = j;
    d->mode_parity[2 * j] = 1;
  }
  return d;
}

Exec& default_exec() {
  static Exec mode = Exec::Parallel;
  return mode;
}

}  // namespace shrinkerlab
