#pragma once

#include <map>
#include <string>
#include <vector>

namespace shrinkerlab {

struct PerturbationTerm {
  int j = 0;
  int m = 0;
  double amplitude = 0.0;
  int parity = 0;  // 0 = cos branch
};

/// Flat key-value experiment configuration (TOML-compatible subset: one
/// `key = value` per line, # comments, optional quotes).  Identical config +
/// seed produce byte-identical outputs.
struct ExperimentConfig {
  int k = 1;
  int n = 2;
  int n_theta = 64;
  int M = 64;
  double L = 12.0;
  double dt = 0.01;
  long steps = 1000;
  std::string scheme = "imex-spectral";
  bool stabilize = true;
  std::vector<PerturbationTerm> perturb;
  long cadence = 10;        // diagnostics every N steps
  long fit_cadence = 100;   // cylinder fit / checkpoint every N steps
  std::uint64_t seed = 1;
  std::string outdir = "out";
  double norm_radius = -1.0;  // default L - 2
  double eps0 = 0.05;
  int ell = 2;
  double C_ell = 10.0;
  double margin_frac = 0.2;
  bool emit_svg = false;
  double tail_tolerance = 1e-12;  // required bound on e^{-L^2/4}

  std::string key_value_echo() const;  // canonical serialization for manifests
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Throws std::invalid_argument listing every offending field.
void validate_config(const ExperimentConfig& cfg);

std::vector<PerturbationTerm> parse_perturbation(const std::string& spec);

}  // namespace shrinkerlab
