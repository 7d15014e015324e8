#include "shrinkerlab/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shrinkerlab {

double sphere_cluster(int j, int k) {
  return (static_cast<double>(j) * j + (k - 1.0) * j) / (2.0 * k);
}

double basis_eigenvalue(int j, int m, int k) {
  if (j < 0 || m < 0) throw std::invalid_argument("basis_eigenvalue: j, m >= 0");
  return 1.0 - sphere_cluster(j, k) - 0.5 * m;
}

KernelBasis kernel_basis(int k, int n, const DiscPtr& disc) {
  if (k < 1 || k > n) throw std::invalid_argument("kernel_basis: need 1 <= k <= n");
  KernelBasis kb;
  kb.k = k;
  kb.n = n;
  if (k == n) {
    kb.sphere_case = true;
    kb.dim = 0;
    return kb;
  }
  int nk = n - k;
  kb.dim = nk * (nk + 1) / 2 + nk * (k + 1);
  for (int i = 0; i < nk * (nk + 1) / 2; ++i) kb.labels.push_back("quadratic");
  for (int i = 0; i < nk * (k + 1); ++i) kb.labels.push_back("rotation");
  if (disc && k == 1 && n == 2) {
    kb.fields.push_back(unit_mode(disc, 0, 2));      // y^2 - 2 direction
    kb.fields.push_back(unit_mode(disc, 1, 1, 0));   // y cos(theta)
    kb.fields.push_back(unit_mode(disc, 1, 1, 1));   // y sin(theta)
  }
  return kb;
}

KernelSplit project_kernel(const GraphField& u) {
  const auto& d = *u.disc;
  KernelSplit s{GraphField(u.disc), GraphField(u.disc)};
  for (int tb = 0; tb < d.n_tb; ++tb)
    for (int m = 0; m <= d.M; ++m) {
      std::size_t idx = d.mode_index(tb, m);
      if (std::abs(d.eigenvalue(tb, m)) < 1e-14)
        s.u_kernel.coeff[idx] = u.coeff[idx];
      else
        s.u_perp.coeff[idx] = u.coeff[idx];
    }
  return s;
}

GraphField apply_L(const GraphField& u) {
  const auto& d = *u.disc;
  GraphField out(u.disc);
  for (int tb = 0; tb < d.n_tb; ++tb)
    for (int m = 0; m <= d.M; ++m) {
      std::size_t idx = d.mode_index(tb, m);
      out.coeff[idx] = d.eigenvalue(tb, m) * u.coeff[idx];
    }
  return out;
}

double spectral_gap(int k, int n) {
  (void)n;
  double gap = 1e300;
  for (int j = 0; j <= 40; ++j)
    for (int m = 0; m <= 80; ++m) {
      double lam = basis_eigenvalue(j, m, k);
      if (std::abs(lam) > 1e-12) gap = std::min(gap, std::abs(lam));
    }
  return gap;
}

namespace {

std::vector<double> node_weights(const Discretization& d) {
  std::vector<double> w(d.n_nodes());
  for (int i = 0; i < d.n_theta; ++i)
    for (int q = 0; q < d.Q; ++q) w[d.node_index(i, q)] = d.circle_w[i] * d.yw[q];
  return w;
}

}  // namespace

RegionNorm gaussian_norm_region(const GraphField& u, NormKind kind, double R) {
  const auto& d = *u.disc;
  const double twok = 2.0 * d.k;
  double ycut2 = (R < 0) ? 1e300 : R * R - twok;
  RegionNorm out;
  if (R >= 0 && ycut2 < 0) return out;  // ball misses the cylinder

  auto w = node_weights(d);
  std::vector<double> vals = u.nodal();
  std::vector<double> ut, uy, utt, uty, uyy;
  if (kind == NormKind::W12 || kind == NormKind::W22) {
    ut = u.nodal(1, 0);
    uy = u.nodal(0, 1);
  }
  if (kind == NormKind::W22) {
    utt = u.nodal(2, 0);
    uty = u.nodal(1, 1);
    uyy = u.nodal(0, 2);
  }
  const double r = d.radius;
  double acc = 0.0;
  double ymax = 0.0;
  for (int q = 0; q < d.Q; ++q) ymax = std::max(ymax, std::abs(d.y[q]));
  for (int i = 0; i < d.n_theta; ++i)
    for (int q = 0; q < d.Q; ++q) {
      if (d.y[q] * d.y[q] > ycut2) continue;
      std::size_t idx = d.node_index(i, q);
      double term = 0.0;
      switch (kind) {
        case NormKind::L1:
          term = std::abs(vals[idx]);
          break;
        case NormKind::L2:
          term = vals[idx] * vals[idx];
          break;
        case NormKind::W12: {
          double g2 = (ut[idx] / r) * (ut[idx] / r) + uy[idx] * uy[idx];
          term = vals[idx] * vals[idx] + g2;
          break;
        }
        case NormKind::W22: {
          double g2 = (ut[idx] / r) * (ut[idx] / r) + uy[idx] * uy[idx];
          double h11 = utt[idx] / (r * r), h12 = uty[idx] / r, h22 = uyy[idx];
          term = vals[idx] * vals[idx] + g2 + h11 * h11 + 2.0 * h12 * h12 + h22 * h22;
          break;
        }
      }
      acc += term * w[idx];
    }
  out.value = (kind == NormKind::L1) ? acc : std::sqrt(acc);
  if (R >= 0 && ycut2 > ymax * ymax) {
    out.truncated = true;
    out.tail_bound = u.l2_norm() * std::exp(-ymax * ymax / 8.0);
  }
  return out;
}

double gaussian_norm(const GraphField& u, NormKind kind, double R) {
  return gaussian_norm_region(u, kind, R).value;
}

PoincareRecord poincare_check(const GraphField& u) {
  const auto& d = *u.disc;
  auto w = node_weights(d);
  auto vals = u.nodal();
  auto uy = u.nodal(0, 1);
  const double twok = 2.0 * d.k;
  double lhs = 0.0, l2 = 0.0, gy = 0.0;
  for (int i = 0; i < d.n_theta; ++i)
    for (int q = 0; q < d.Q; ++q) {
      std::size_t idx = d.node_index(i, q);
      double u2 = vals[idx] * vals[idx];
      lhs += u2 * (twok + d.y[q] * d.y[q]) * w[idx];
      l2 += u2 * w[idx];
      gy += uy[idx] * uy[idx] * w[idx];
    }
  PoincareRecord rec;
  rec.lhs = lhs;
  rec.rhs = (4.0 * (d.n - d.k) + twok) * l2 + 16.0 * gy;
  rec.pass = lhs <= rec.rhs * (1.0 + 1e-12) + 1e-12;
  return rec;
}

double quadratic_norm(const GraphField& u) {
  const auto& d = *u.disc;
  auto w = node_weights(d);
  auto vals = u.nodal();
  auto ut = u.nodal(1, 0);
  auto uy = u.nodal(0, 1);
  auto utt = u.nodal(2, 0);
  auto uty = u.nodal(1, 1);
  auto uyy = u.nodal(0, 2);
  const double r = d.radius;
  const double twok = 2.0 * d.k;
  double acc = 0.0;
  for (int i = 0; i < d.n_theta; ++i)
    for (int q = 0; q < d.Q; ++q) {
      std::size_t idx = d.node_index(i, q);
      double g2 = (ut[idx] / r) * (ut[idx] / r) + uy[idx] * uy[idx];
      double h11 = utt[idx] / (r * r), h12 = uty[idx] / r, h22 = uyy[idx];
      double hess2 = h11 * h11 + 2.0 * h12 * h12 + h22 * h22;
      double hess_axis2 = h12 * h12 + h22 * h22;
      double xlen = std::sqrt(twok + d.y[q] * d.y[q]);
      double qv = vals[idx] * vals[idx] + g2 + hess_axis2 + hess2 / (1.0 + xlen);
      acc += qv * qv * w[idx];
    }
  return std::sqrt(acc);
}

double kernel_quadratic_constant(const DiscPtr& disc) {
  auto kb = kernel_basis(disc->k, disc->n, disc);
  double c = 0.0;
  for (const auto& v : kb.fields) {
    double n2 = v.l2_norm();
    c = std::max(c, quadratic_norm(v) / (n2 * n2));
  }
  return c;
}

namespace {

// 4th-order second-difference matrix, optionally periodic.  Symmetric by
// construction (coefficients depend on |i-j| only).
Eigen::MatrixXd d2_matrix(int n, double h, bool periodic) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  const double c0 = -30.0, c1 = 16.0, c2 = -1.0;
  const double s = 1.0 / (12.0 * h * h);
  for (int i = 0; i < n; ++i) {
    auto add = [&](int j, double v) {
      if (periodic)
        A(i, ((j % n) + n) % n) += v * s;
      else if (j >= 0 && j < n)
        A(i, j) += v * s;
    };
    add(i, c0);
    add(i - 1, c1);
    add(i + 1, c1);
    add(i - 2, c2);
    add(i + 2, c2);
  }
  return A;
}

}  // namespace

std::vector<double> fd_spectrum(int n_theta, int n_y, double L, int count) {
  // Circle factor: Laplacian on S^1_{sqrt 2} is (1/2) d^2/dtheta^2.
  double h_t = 2.0 * M_PI / n_theta;
  Eigen::MatrixXd At = 0.5 * d2_matrix(n_theta, h_t, true);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> est(At);

  // Axis factor in oscillator form: conjugating the drift operator by
  // e^{y^2/8} gives psi'' + (1/4 - y^2/16) psi with the same eigenvalues.
  double h_y = 2.0 * L / (n_y - 1);
  Eigen::MatrixXd Ay = d2_matrix(n_y, h_y, false);
  for (int i = 0; i < n_y; ++i) {
    double y = -L + i * h_y;
    Ay(i, i) += 0.25 - y * y / 16.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esy(Ay);

  // Keep only the top (least negative) eigenvalues from each factor; the
  // combined low-|lambda| modes use small j and m.
  std::vector<double> mt(est.eigenvalues().data(), est.eigenvalues().data() + n_theta);
  std::vector<double> my(esy.eigenvalues().data(), esy.eigenvalues().data() + n_y);
  std::sort(mt.rbegin(), mt.rend());
  std::sort(my.rbegin(), my.rend());
  int keep_t = std::min<int>(n_theta, 20);
  int keep_y = std::min<int>(n_y, 20);

  std::vector<double> lambdas;
  for (int a = 0; a < keep_t; ++a)
    for (int b = 0; b < keep_y; ++b) lambdas.push_back(1.0 + mt[a] + my[b]);
  std::sort(lambdas.begin(), lambdas.end(),
            [](double x, double y) { return std::abs(x) < std::abs(y); });
  lambdas.resize(std::min<std::size_t>(lambdas.size(), count));
  return lambdas;
}

std::vector<double> exact_spectrum(int count) {
  std::vector<double> lambdas;
  for (int j = 0; j <= 12; ++j) {
    int mult = (j == 0) ? 1 : 2;
    for (int m = 0; m <= 24; ++m) {
      double lam = basis_eigenvalue(j, m, 1);
      for (int c = 0; c < mult; ++c) lambdas.push_back(lam);
    }
  }
  std::stable_sort(lambdas.begin(), lambdas.end(),
                   [](double x, double y) { return std::abs(x) < std::abs(y); });
  lambdas.resize(count);
  return lambdas;
}

int numeric_kernel_dim(int count, double threshold) {
  auto lam = exact_spectrum(count);
  int dim = 0;
  for (double l : lam)
    if (std::abs(l) < threshold) ++dim;
  return dim;
}

}  // namespace shrinkerlab
