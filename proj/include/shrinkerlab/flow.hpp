#pragma once

#include <limits>
#include <string>
#include <vector>

#include "shrinkerlab/graph_ops.hpp"
#include "shrinkerlab/surface.hpp"

namespace shrinkerlab {

enum class FlowScheme { ImexSpectral, ExplicitRk4 };
enum class FlowStatus { Ok, GraphBreakdown, NonFinite };

FlowScheme flow_scheme_from_string(const std::string& s);
std::string to_string(FlowScheme s);

struct FlowConfig {
  double dt = 0.01;
  FlowScheme scheme = FlowScheme::ImexSpectral;
  bool stabilize = true;
  double margin_frac = 0.2;  // halt when sup|u| >= (1 - margin_frac) * sqrt(2k)
};

struct FlowState {
  double s = 0.0;
  long step = 0;
  GraphField u;
};

struct StepResult {
  FlowStatus status = FlowStatus::Ok;
  std::string reason;
};

/// Advances d_t u = w (eta/2 - H_u) by one step.  imex-spectral treats the
/// diagonal linearized part implicitly (exact solve per mode) and the
/// remainder explicitly; explicit-rk4 is the cross-check scheme.  On graph
/// breakdown or non-finite values the state is left at the last valid step
/// and the reason is reported; runs halt, they never clip.
StepResult flow_step(FlowState& st, const FlowConfig& cfg);

/// Zeroes the positive-eigenvalue amplitudes (dilation + translations);
/// these re-center the spacetime singularity rather than change shape.
void project_out_unstable(GraphField& u);
/// Max amplitude currently sitting in the stabilized modes.
double unstable_amplitude(const GraphField& u);
/// Amplitudes of the kernel modes (y^2-2, y cos, y sin) for k=1, n=2.
std::array<double, 3> kernel_amplitudes(const GraphField& u);

/// Gaussian surface area F = (4 pi)^{-n/2} int e^{-|x|^2/4}.
double f_functional(const SurfaceSample& s);
double f_functional(const GraphField& u);

/// F with recentered/rescaled Gaussian, integrated on a uniform axis grid
/// (the quadrature weight cannot absorb wide recentred Gaussians).
double recentered_gaussian_area(const GraphField& u, const Vec3& x0, double t0);

/// Entropy: sup of recentered Gaussian areas over centers in [-3,3]^3 and
/// scales in [0.25, 4] (coarse grid + local refinement, deterministic).
struct EntropyEstimate {
  double value = 0.0;
  Vec3 center{0, 0, 0};
  double scale = 1.0;
};
EntropyEstimate entropy_estimate(const GraphField& u);

/// Flow-diagnostic phi norms carry the same (4 pi)^{-n/2} normalization as F
/// so the energy identity dF/ds = -||phi||^2 holds without constants.
double flow_phi_l2(const SurfaceSample& s, double R = -1.0);
double flow_phi_l1(const SurfaceSample& s, double R = -1.0);

/// (4 pi tau)^{-n/2} int_Sigma e^{-|x-x0|^2/(4 tau)}; tau in (0, 1/2].
/// Integrated on a dedicated fine grid: small tau concentrates the Gaussian
/// below the quadrature-node spacing.
double local_gaussian_density(const GraphField& u, const Vec3& x0, double tau);

/// MCF time t < 0 <-> rescaled time s = -log(-t); scale factor 1/sqrt(-t).
double rescaled_time_from_mcf(double t);
double mcf_time_from_rescaled(double s);
double rescaled_scale_factor(double t);

/// One diagnostics row of a flow run (fixed CSV column order).
struct SeriesRow {
  long step = 0;
  double s = 0.0;
  double F = 0.0;
  double phi_l1_br = 0.0;
  double phi_l2_br = 0.0;
  double phi_l2 = 0.0;
  double dFds = std::numeric_limits<double>::quiet_NaN();
  double dC_R = std::numeric_limits<double>::quiet_NaN();
  double r_cyl = std::numeric_limits<double>::quiet_NaN();
  double R_shrink = std::numeric_limits<double>::infinity();
  double axis_a = 0.0;
  double axis_b = 0.0;
  std::array<double, 3> kernel_amp{0, 0, 0};
  double unstable_amp = 0.0;
};

/// Max over interior rows of |dF/ds + ||phi||^2| with central-difference
/// dF/ds; needs >= 3 rows at uniform s spacing.
struct EnergyIdentityResidual {
  double max_abs = 0.0;
  double max_rel = 0.0;
};
EnergyIdentityResidual energy_identity_residual(const std::vector<SeriesRow>& rows);

/// || d_t phi - L phi ||_{L2(B_R)} from three consecutive states, with the
/// surface operator evaluated on the middle slice.
double phi_evolution_residual(const GraphField& u_prev, const GraphField& u_mid,
                              const GraphField& u_next, double dt, double R);

/// Largest upward F step between consecutive rows (scheme slack monitor).
double f_monotonicity_violation(const std::vector<SeriesRow>& rows);

}  // namespace shrinkerlab
