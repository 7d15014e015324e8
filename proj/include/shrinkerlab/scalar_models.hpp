#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace shrinkerlab {

/// Non-increasing sequence f(0..N) >= 0 with K f(t)^{1+eps} <= f(t-1) - f(t+1).
struct DecaySequence {
  std::vector<double> values;
  double eps = 0.5;
  double K = 1.0;

  /// Returns the first t violating admissibility, or -1 when admissible.
  long first_violation() const;
};

/// Power-decay certificate from the proof recipe: after normalizing so
/// f(0) <= 1 and K = 1, t0 = 4 * 2^eps f(0)^{-eps}/eps + 2 and
/// C = f(0) t0^{1/eps} (denormalized); then f(t) <= C t^{-1/eps} is checked
/// for every t >= 1.
struct DecayBound {
  double C = 0.0;
  bool verified = false;
};
DecayBound discrete_decay_bound(const DecaySequence& seq);

/// Partial sums of (f(j) - f(j+1))^{1/2}, with the Cauchy-Schwarz split
/// certificate sum^2 <= [sum (f(j)-f(j+1)) j^p] [sum j^{-p}] for a
/// p in (1, 1/eps).  Requires eps < 1.
struct SqrtIncrementSums {
  std::vector<double> partial;
  double total = 0.0;
  double tail = 0.0;          // sum over the last half of the indices
  double p = 0.0;             // split exponent used
  double weighted_sum = 0.0;  // sum (f(j)-f(j+1)) j^p
  double zeta_bound = 0.0;    // bound on sum j^{-p}
  double certificate = 0.0;   // sqrt(weighted_sum * zeta_bound) >= total
};
SqrtIncrementSums sqrt_increment_sum(const DecaySequence& seq);

/// Builds an admissible sequence backwards from a positive tail:
/// f(t-1) = max(f(t), f(t+1) + K f(t)^{1+eps}) + slack.
DecaySequence make_admissible_sequence(int n, double eps, double K, std::uint64_t seed);

/// Polynomial R^d -> R with exact gradient; terms are coeff * prod x_i^{e_i}.
struct ModelFunction {
  int dim = 1;
  std::vector<double> coeff;
  std::vector<std::vector<int>> expo;

  double value(const std::vector<double>& x) const;
  std::vector<double> gradient(const std::vector<double>& x) const;
  std::vector<double> hessian_at_zero() const;  // row-major dim x dim
};

ModelFunction parse_polynomial(int dim, const std::vector<std::pair<double, std::vector<int>>>& terms);

/// Integrates x' = -grad f with adaptive step-doubling RK4; tracks f(t) and
/// the curve length int |grad f| dt.
struct GradientFlowResult {
  std::vector<double> times;
  std::vector<std::vector<double>> traj;
  std::vector<double> fvals;
  double length = 0.0;
  bool left_domain = false;  // trajectory left the allowed box
};
GradientFlowResult ode_gradient_flow(const ModelFunction& f, const std::vector<double>& x0,
                                     double T, double domain_radius = 1e6, double tol = 1e-10);

/// Two-region verification of |f|^{2/3} <= C |grad f| near a critical point,
/// splitting the degenerate/nondegenerate coordinates by |z|^2 vs eps_split |y|.
struct TaylorRegionRecord {
  bool hypothesis_ok = false;   // |grad f| >= c |x|^2 held on the grid
  double c_fit = 0.0;           // fitted first-inequality constant
  double c_fit_refined = 0.0;   // same at doubled resolution (stability probe)
  std::vector<double> hypothesis_worst_x;
  double C_near = 0.0;  // fitted constant on |z|^2 <= eps_split |y|
  double C_far = 0.0;   // fitted constant on the complement
  double C_half = 0.0;  // fitted constant of the beta = 1/2 inequality
  bool pass = false;
  std::string note;
};
TaylorRegionRecord taylor_region_check(const ModelFunction& f, double box, int grid,
                                       double eps_split = 0.1);

/// Interpolation-inequality check on B_{2r} in R^1: sup-norm bounds of u,
/// u', u'' by the L1 mass plus the k-th derivative, with exponents
/// a=k/(k+n), b=(k-1)/(k+n), c=(k-2)/(k+n) and fitted constants.
struct InterpolationRecord {
  double r = 1.0;
  int k = 2;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;  // fitted constants for the 3 bounds
  bool ok = true;
  std::string note;
};
InterpolationRecord interpolation_check(const std::function<double(double)>& u, double r,
                                        int k, int samples = 4001,
                                        double exponent_shift = 0.0);

}  // namespace shrinkerlab
