#include "shrinkerlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shrinkerlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw std::invalid_argument("config: boolean expected for " + key);
}

}  // namespace

std::vector<PerturbationTerm> parse_perturbation(const std::string& spec) {
  // "(j,m,amp[,sin|cos])" groups separated by ';' or whitespace
  std::vector<PerturbationTerm> out;
  std::string cur;
  auto flush = [&]() {
    std::string g = trim(cur);
    cur.clear();
    if (g.empty()) return;
    if (g.front() == '(') g = g.substr(1);
    if (!g.empty() && g.back() == ')') g.pop_back();
    std::vector<std::string> parts;
    std::stringstream ss(g);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trim(item));
    if (parts.size() < 3 || parts.size() > 4)
      throw std::invalid_argument("perturbation term needs (j,m,amplitude[,branch]): " + g);
    PerturbationTerm t;
    t.j = std::stoi(parts[0]);
    t.m = std::stoi(parts[1]);
    t.amplitude = std::stod(parts[2]);
    if (parts.size() == 4) {
      if (parts[3] == "sin")
        t.parity = 1;
      else if (parts[3] == "cos")
        t.parity = 0;
      else
        throw std::invalid_argument("perturbation branch must be cos or sin: " + g);
    }
    out.push_back(t);
  };
  int depth = 0;
  for (char c : spec) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ';' || (std::isspace(static_cast<unsigned char>(c)) && depth == 0)) && depth == 0) {
      flush();
      continue;
    }
    cur.push_back(c);
  }
  flush();
  return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value, got: " + line);
    kv[trim(line.substr(0, eq))] = unquote(trim(line.substr(eq + 1)));
  }

  ExperimentConfig cfg;
  std::vector<std::string> unknown;
  for (const auto& [key, val] : kv) {
    if (key == "k") cfg.k = std::stoi(val);
    else if (key == "n") cfg.n = std::stoi(val);
    else if (key == "n_theta") cfg.n_theta = std::stoi(val);
    else if (key == "hermite_cap") cfg.M = std::stoi(val);
    else if (key == "truncation") cfg.L = std::stod(val);
    else if (key == "dt") cfg.dt = std::stod(val);
    else if (key == "steps") cfg.steps = std::stol(val);
    else if (key == "scheme") cfg.scheme = val;
    else if (key == "stabilize") cfg.stabilize = parse_bool(val, key);
    else if (key == "perturb") cfg.perturb = parse_perturbation(val);
    else if (key == "cadence") cfg.cadence = std::stol(val);
    else if (key == "fit_cadence") cfg.fit_cadence = std::stol(val);
    else if (key == "seed") cfg.seed = std::stoull(val);
    else if (key == "outdir") cfg.outdir = val;
    else if (key == "norm_radius") cfg.norm_radius = std::stod(val);
    else if (key == "eps0") cfg.eps0 = std::stod(val);
    else if (key == "ell") cfg.ell = std::stoi(val);
    else if (key == "C_ell") cfg.C_ell = std::stod(val);
    else if (key == "margin_frac") cfg.margin_frac = std::stod(val);
    else if (key == "emit_svg") cfg.emit_svg = parse_bool(val, key);
    else unknown.push_back(key);
  }
  if (!unknown.empty()) {
    std::string msg = "config: unknown keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw std::invalid_argument(msg);
  }
  if (cfg.norm_radius < 0) cfg.norm_radius = cfg.L - 2.0;
  validate_config(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> bad;
  if (cfg.k != 1 || cfg.n != 2) bad.push_back("k/n (nodal runs support k=1, n=2)");
  if (cfg.n_theta < 8 || cfg.n_theta % 2 != 0) bad.push_back("n_theta (even, >= 8)");
  if (cfg.M < 4) bad.push_back("hermite_cap (>= 4)");
  if (!(cfg.dt > 0.0)) bad.push_back("dt (> 0)");
  if (cfg.steps < 0) bad.push_back("steps (>= 0)");
  if (cfg.cadence < 1) bad.push_back("cadence (>= 1)");
  if (cfg.fit_cadence < 1) bad.push_back("fit_cadence (>= 1)");
  if (std::exp(-cfg.L * cfg.L / 4.0) > cfg.tail_tolerance)
    bad.push_back("truncation (e^{-L^2/4} exceeds the tail tolerance)");
  if (cfg.norm_radius > cfg.L) bad.push_back("norm_radius (<= truncation)");
  if (cfg.scheme != "imex-spectral" && cfg.scheme != "explicit-rk4") bad.push_back("scheme");
  for (const auto& t : cfg.perturb) {
    if (t.j < 0 || t.m < 0 || t.m > cfg.M || (t.j == 0 && t.parity == 1))
      bad.push_back("perturb (mode out of range)");
  }
  if (!bad.empty()) {
    std::string msg = "invalid config fields:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw std::invalid_argument(msg);
  }
}

std::string ExperimentConfig::key_value_echo() const {
  char buf[64];
  std::ostringstream os;
  os << "k = " << k << "\n"
     << "n = " << n << "\n"
     << "n_theta = " << n_theta << "\n"
     << "hermite_cap = " << M << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", L);
  os << "truncation = " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", dt);
  os << "dt = " << buf << "\n";
  os << "steps = " << steps << "\n"
     << "scheme = " << scheme << "\n"
     << "stabilize = " << (stabilize ? "true" : "false") << "\n";
  os << "perturb = \"";
  for (std::size_t i = 0; i < perturb.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", perturb[i].amplitude);
    os << (i ? ";" : "") << "(" << perturb[i].j << "," << perturb[i].m << "," << buf << ","
       << (perturb[i].parity ? "sin" : "cos") << ")";
  }
  os << "\"\n";
  os << "cadence = " << cadence << "\n"
     << "fit_cadence = " << fit_cadence << "\n"
     << "seed = " << seed << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", norm_radius);
  os << "norm_radius = " << buf << "\n";
  return os.str();
}

}  // namespace shrinkerlab
