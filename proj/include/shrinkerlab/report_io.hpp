#pragma once

#include <string>
#include <vector>

#include "shrinkerlab/flow.hpp"
#include "shrinkerlab/harness.hpp"

namespace shrinkerlab {

/// All emitted floats use up to 17 significant digits (round-trip exact).
std::string fmt17(double v);

/// Diagnostics CSV, fixed header:
/// step,s,F,phi_L1_BR,phi_L2_BR,phi_L2,dFds,dC_R,r_cyl,R_shrink,axis_a,axis_b
extern const char* kDiagnosticsHeader;
void write_diagnostics_csv(const std::string& path, const std::vector<SeriesRow>& rows);
std::vector<SeriesRow> read_diagnostics_csv(const std::string& path);

void write_kernel_amplitudes_csv(const std::string& path, const std::vector<SeriesRow>& rows);

/// Snapshot: JSON header {k, n, N_theta, M, L, s} plus the coefficient
/// sequence in mode order (theta-basis index major, Hermite degree minor).
void write_snapshot(const std::string& path, const GraphField& u, double s);
struct Snapshot {
  GraphField u;
  double s = 0.0;
};
Snapshot read_snapshot(const std::string& path);

struct CheckRow {
  std::string suite, check, params;
  double lhs = 0.0, rhs = 0.0, constant = 0.0;
  bool pass = false;
};
void write_check_csv(const std::string& path, const std::vector<CheckRow>& rows);

void write_loja_csv(const std::string& path, const std::vector<LojasiewiczReport>& reports);
void write_scale_csv(const std::string& path, const std::vector<ScaleReport>& reports);
void write_uniqueness_csv(const std::string& path, const UniquenessReport& rep);

/// Log-log scatter plot with fitted-slope annotations, one path per family.
struct LogLogSeries {
  std::string name;
  std::vector<double> x, y;
  double slope = 0.0;
};
void write_loglog_svg(const std::string& path, const std::vector<LogLogSeries>& series);

}  // namespace shrinkerlab
