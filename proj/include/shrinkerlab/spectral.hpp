#pragma once

#include <string>
#include <vector>

#include "shrinkerlab/graph_field.hpp"

namespace shrinkerlab {

/// Eigenvalue bookkeeping for L = D + 1 on the cylinder S^k_{sqrt(2k)} x R^{n-k},
/// where D is the drift Laplacian.  Sphere harmonics come in clusters
/// cluster(j,k) = (j^2 + (k-1) j)/(2k); Hermite degree m contributes m/2.
///
/// Sign convention: we report lambda with L u = lambda u.  The drift-operator
/// convention (L u = -mu u) flips the sign; the sphere spectrum quoted as
/// "-1, -1/2, 1/k" in that convention is "1, 1/2, -1/k" here.  This is the
/// single place the conversion lives.
double sphere_cluster(int j, int k);
double basis_eigenvalue(int j, int m, int k);

struct ModeIndex {
  int j = 0;       // sphere cluster index
  int parity = 0;  // cos/sin branch for k=1 nodal fields
  int m = 0;       // Hermite degree
  double lambda = 0.0;
};

/// Kernel of L on the cylinder: rotation modes y_i f_i and quadratic modes
/// y_i y_j - 2 delta_ij; dim = (n-k)(n-k+1)/2 + (n-k)(k+1).
struct KernelBasis {
  int k = 1, n = 2;
  int dim = 0;
  std::vector<std::string> labels;   // "quadratic" / "rotation" per element
  std::vector<GraphField> fields;    // materialized for the nodal (1,2) case
  bool sphere_case = false;          // k == n: kernel of the sphere problem (empty)
};

/// k = n yields the sphere problem, whose L has no kernel; returned flagged.
KernelBasis kernel_basis(int k, int n, const DiscPtr& disc = nullptr);

/// L2-orthogonal projection onto ker L and its complement.  In the spectral
/// representation the kernel is spanned by exact basis modes, so the split is
/// a coefficient partition; it is idempotent and self-adjoint by construction.
struct KernelSplit {
  GraphField u_kernel;
  GraphField u_perp;
};
KernelSplit project_kernel(const GraphField& u);

/// L u in the spectral representation (diagonal action lambda * amplitude).
GraphField apply_L(const GraphField& u);

/// min |lambda| over nonzero eigenvalues;  mu ||u_perp|| <= ||L u||.
double spectral_gap(int k, int n);

enum class NormKind { L1, L2, W12, W22 };

/// Gaussian norm of a field on the cylinder, optionally restricted to the
/// ball B_R (|x|^2 = 2k + y^2 <= R^2).  Unnormalized convention:
/// ||u||_{L2}^2 = int u^2 e^{-|x|^2/4} dmu.
double gaussian_norm(const GraphField& u, NormKind kind, double R = -1.0);

struct RegionNorm {
  double value = 0.0;
  bool truncated = false;   // region exceeded the quadrature support
  double tail_bound = 0.0;  // crude bound on the missing mass
};
RegionNorm gaussian_norm_region(const GraphField& u, NormKind kind, double R);

/// Gaussian Poincare check with constants traced through the divergence-
/// theorem proof:  || |x| u ||^2 <= (4(n-k)+2k) ||u||^2 + 16 ||grad_axis u||^2.
struct PoincareRecord {
  double lhs = 0.0, rhs = 0.0;
  bool pass = false;
};
PoincareRecord poincare_check(const GraphField& u);

/// || u^2 + |grad u|^2 + |Hess_u(., axis)|^2 + (1+|x|)^{-1} |Hess_u|^2 ||_{L2};
/// quadratically homogeneous.
double quadratic_norm(const GraphField& u);

/// Ratio max over the kernel basis of quadratic_norm(v) / ||v||^2.
double kernel_quadratic_constant(const DiscPtr& disc);

/// Finite-difference spectrum of the discretized L (k=1, n=2): 4th-order
/// periodic stencil on the circle plus a 4th-order symmetric discretization
/// of the axis operator in oscillator form on [-L, L].  Returns eigenvalues
/// with multiplicity, sorted by |lambda|.
std::vector<double> fd_spectrum(int n_theta, int n_y, double L, int count);

/// The same count of exact eigenvalues 1 - j^2/2 - m/2, sorted by |lambda|.
std::vector<double> exact_spectrum(int count);

/// Number of spectral-path eigenvalues with |lambda| below the threshold
/// among the lowest `count` modes (the numeric nullspace dimension).
int numeric_kernel_dim(int count = 40, double threshold = 1e-6);

}  // namespace shrinkerlab
