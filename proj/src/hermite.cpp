#include "shrinkerlab/hermite.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace shrinkerlab {

GaussHermiteRule gauss_hermite_rule(int q) {
  if (q < 1) throw std::invalid_argument("gauss_hermite_rule: need q >= 1");
  // Jacobi matrix for the e^{-x^2} weight: off-diagonal sqrt(k/2).
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(q, q);
  for (int k = 1; k < q; ++k) {
    double b = std::sqrt(0.5 * k);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_hermite_rule: eigensolver failed");
  const double mu0 = std::sqrt(M_PI);  // \int e^{-x^2} dx
  GaussHermiteRule r;
  r.nodes.resize(q);
  r.weights.resize(q);
  for (int i = 0; i < q; ++i) {
    double x = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    r.nodes[i] = 2.0 * x;               // y = 2x
    r.weights[i] = 2.0 * mu0 * v0 * v0; // dy = 2 dx
  }
  return r;
}

std::vector<double> hermite_values(int max_degree, double y) {
  std::vector<double> h(max_degree + 1);
  // h_0 = (2 sqrt(pi))^{-1/2} since \int e^{-y^2/4} dy = 2 sqrt(pi).
  h[0] = 1.0 / std::sqrt(2.0 * std::sqrt(M_PI));
  if (max_degree >= 1) h[1] = y / std::sqrt(2.0) * h[0];
  for (int m = 1; m < max_degree; ++m) {
    h[m + 1] = y / std::sqrt(2.0 * (m + 1)) * h[m] -
               std::sqrt(static_cast<double>(m) / (m + 1)) * h[m - 1];
  }
  return h;
}

double hermite_derivative_factor(int m) { return std::sqrt(0.5 * m); }

}  // namespace shrinkerlab
