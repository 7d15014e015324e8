#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shrinkerlab/cylinder.hpp"
#include "shrinkerlab/flow.hpp"
#include "shrinkerlab/surface.hpp"

namespace shrinkerlab {

/// Best-fit cylinder through a sample: minimizes the Gaussian L2 distance
/// between the distance-to-axis function and sqrt(2k) over axis rotations
/// (k=1, n=2: two parameters on the axis sphere).  Deterministic multi-start
/// Nelder-Mead; the axis is reported with its e3 component >= 0.
struct CylinderFit {
  Vec3 axis{0, 0, 1};
  double d2 = 0.0;        // squared Gaussian L2 distance in B_R
  double d = 0.0;
  bool converged = true;
  double axis_a = 0.0;    // axis components along e1, e2 (chart coordinates)
  double axis_b = 0.0;
};

struct FitOptions {
  int starts = 16;
  int max_iter = 400;
  double tol = 1e-10;             // on d^2
  std::optional<Vec3> warm_start; // skip multi-start when close to a known axis
};

CylinderFit fit_cylinder(const SurfaceSample& sample, double R, const FitOptions& opts = {});

/// Gaussian L2 distance of the sample to the space of cylinders in B_R.
double distance_to_cylinders(const SurfaceSample& sample, double R, const FitOptions& opts = {});

/// Cylindrical scale: largest R such that B_R cap Sigma is a graph over the
/// fitted cylinder with C^2 norm <= eps0 and |nabla^l A| <= C_l (C^2 proxy
/// for the Holder norm).  Bisection on R; returns 0 with a flag when not
/// graphical even at R = 1; capped at the sampled radius.
struct CylindricalScale {
  double r = 0.0;
  bool graphical = true;
  bool capped = false;
  int ell = 2;
  double C_ell = 10.0;
  double eps0 = 0.05;
};
CylindricalScale cylindrical_scale(const SurfaceSample& sample, const CylinderFit& fit,
                                   double eps0 = 0.05, int ell = 2, double C_ell = 10.0);

/// Shrinker scale R with e^{-R^2/2} = F(t-1) - F(t+1); infinite when the
/// drop underflows, data error when F increases beyond slack.
struct ShrinkerScale {
  double R = 0.0;
  bool infinite = false;
};
ShrinkerScale shrinker_scale(double F_before, double F_after);

/// Least-squares slope of log y vs log x with a residual-based band.
/// Requires >= 4 samples spanning at least one decade in x.
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double band = 0.0;  // one-sigma slope uncertainty from residuals
};
ExponentFit exponent_fit(const std::vector<double>& x, const std::vector<double>& y);

/// One point of an epsilon-family for the Lojasiewicz reports.
struct FamilyPoint {
  double eps = 0.0;
  double d2 = 0.0;       // squared distance to cylinders in B_R
  double phi_l1 = 0.0;   // Gaussian L1 of phi in B_R
  double phi_l2 = 0.0;
  double f_gap = 0.0;    // |F - F(cylinder)|
  double grad_norm = 0.0;  // ||M(u)||_{L2}
};

struct LojasiewiczReport {
  std::string family;
  double R = 0.0;
  double lhs = 0.0;           // at the largest epsilon
  std::vector<double> rhs_terms;
  double fitted_exponent = 0.0;
  double fitted_constant = 0.0;
  bool pass = false;
  std::string note;
};

/// d_C(R)^2 against ||phi||_{L1(B_R)}^b + e^{-b R^2/4}; the exponent is the
/// fitted log-log slope capped at one, the constant is the worst ratio.
LojasiewiczReport first_lojasiewicz_report(const std::vector<FamilyPoint>& family,
                                           double R, const std::string& name);

/// |F - F(C)| against ||phi||_{L2(B_R)}^e plus the two exponential tails.
LojasiewiczReport gradient_lojasiewicz_report(const std::vector<FamilyPoint>& family,
                                              double R, const std::string& name);

/// Discrete flow inequality (F(t) - F(C))^{1+tau} <= K (F(t-1) - F(t+1)) on
/// integer-spaced samples of a run; K is fitted, with a tail-window
/// stability ratio.
struct DiscreteFlowRecord {
  double tau = 0.5;
  double K_fit = 0.0;
  double tail_ratio = 1.0;  // max/min of per-t constants over the tail window
  int checked = 0;
  int failures_at_K = 0;    // violations when K is halved (sharpness probe)
  bool pass = false;
};
DiscreteFlowRecord discrete_flow_inequality(const std::vector<double>& t,
                                            const std::vector<double>& F, double F_ref,
                                            double tau, double t_min = 5.0);

/// Uniqueness diagnostics: axis total variation, square-root increment sums
/// of F at unit spacing, final phi norm and distance.
struct UniquenessReport {
  double axis_total_variation = 0.0;
  double axis_tv_tail = 0.0;
  double sqrt_increment_sum = 0.0;
  double sqrt_increment_tail = 0.0;
  double final_phi_l2 = 0.0;
  double final_dC = 0.0;
  Vec3 final_axis{0, 0, 1};
  bool converged = true;
  std::string note;
};
UniquenessReport uniqueness_report(const std::vector<SeriesRow>& rows);

/// Ratio of the cylindrical scale to the shrinker scale over the run tail.
struct ScaleReport {
  double t = 0.0;
  double r_ell = 0.0;
  double R_shrink = 0.0;
  double ratio = 0.0;
  bool infinite = false;
};
std::vector<ScaleReport> scale_compatibility_report(const std::vector<SeriesRow>& rows);

/// Fitted constant for the mean-value monitor:
/// max_{s in [t+beta, t']} ||phi||^2_{B_r} <= (C + 1/beta)(F(t) - F(t')).
double mean_value_monitor_constant(const std::vector<SeriesRow>& rows, double beta);

}  // namespace shrinkerlab
