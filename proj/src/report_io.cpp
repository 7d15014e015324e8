#include "shrinkerlab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace shrinkerlab {

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* kDiagnosticsHeader =
    "step,s,F,phi_L1_BR,phi_L2_BR,phi_L2,dFds,dC_R,r_cyl,R_shrink,axis_a,axis_b";

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}
}  // namespace

void write_diagnostics_csv(const std::string& path, const std::vector<SeriesRow>& rows) {
  auto out = open_out(path);
  out << kDiagnosticsHeader << "\n";
  for (const auto& r : rows) {
    out << r.step << ',' << fmt17(r.s) << ',' << fmt17(r.F) << ',' << fmt17(r.phi_l1_br) << ','
        << fmt17(r.phi_l2_br) << ',' << fmt17(r.phi_l2) << ',' << fmt17(r.dFds) << ','
        << fmt17(r.dC_R) << ',' << fmt17(r.r_cyl) << ',' << fmt17(r.R_shrink) << ','
        << fmt17(r.axis_a) << ',' << fmt17(r.axis_b) << "\n";
  }
}

std::vector<SeriesRow> read_diagnostics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader)
    throw std::runtime_error("diagnostics header mismatch in " + path);
  std::vector<SeriesRow> rows;
  auto parse_field = [](const std::string& tok) {
    if (tok == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (tok == "inf") return std::numeric_limits<double>::infinity();
    if (tok == "-inf") return -std::numeric_limits<double>::infinity();
    return std::stod(tok);
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> toks;
    std::size_t pos = 0;
    while (true) {
      std::size_t c = line.find(',', pos);
      toks.push_back(line.substr(pos, c == std::string::npos ? c : c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    if (toks.size() != 12) throw std::runtime_error("bad diagnostics row in " + path);
    SeriesRow r;
    r.step = std::stol(toks[0]);
    r.s = parse_field(toks[1]);
    r.F = parse_field(toks[2]);
    r.phi_l1_br = parse_field(toks[3]);
    r.phi_l2_br = parse_field(toks[4]);
    r.phi_l2 = parse_field(toks[5]);
    r.dFds = parse_field(toks[6]);
    r.dC_R = parse_field(toks[7]);
    r.r_cyl = parse_field(toks[8]);
    r.R_shrink = parse_field(toks[9]);
    r.axis_a = parse_field(toks[10]);
    r.axis_b = parse_field(toks[11]);
    rows.push_back(r);
  }
  return rows;
}

void write_kernel_amplitudes_csv(const std::string& path, const std::vector<SeriesRow>& rows) {
  auto out = open_out(path);
  out << "step,s,amp_quadratic,amp_rot_cos,amp_rot_sin,amp_unstable\n";
  for (const auto& r : rows) {
    out << r.step << ',' << fmt17(r.s) << ',' << fmt17(r.kernel_amp[0]) << ','
        << fmt17(r.kernel_amp[1]) << ',' << fmt17(r.kernel_amp[2]) << ','
        << fmt17(r.unstable_amp) << "\n";
  }
}

void write_snapshot(const std::string& path, const GraphField& u, double s) {
  auto out = open_out(path);
  const auto& d = *u.disc;
  out << "{\n"
      << "  \"k\": " << d.k << ",\n"
      << "  \"n\": " << d.n << ",\n"
      << "  \"N_theta\": " << d.n_theta << ",\n"
      << "  \"M\": " << d.M << ",\n"
      << "  \"L\": " << fmt17(d.L) << ",\n"
      << "  \"s\": " << fmt17(s) << ",\n"
      << "  \"coeff\": [";
  for (std::size_t i = 0; i < u.coeff.size(); ++i)
    out << (i ? "," : "") << fmt17(u.coeff[i]);
  out << "]\n}\n";
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  in >> j;
  int n_theta = j.at("N_theta").get<int>();
  int M = j.at("M").get<int>();
  double L = j.at("L").get<double>();
  auto disc = make_discretization(n_theta, M, L);
  Snapshot snap{GraphField(disc), j.at("s").get<double>()};
  auto coeff = j.at("coeff").get<std::vector<double>>();
  if (coeff.size() != snap.u.coeff.size())
    throw std::runtime_error("snapshot coefficient count mismatch");
  snap.u.coeff = coeff;
  return snap;
}

void write_check_csv(const std::string& path, const std::vector<CheckRow>& rows) {
  auto out = open_out(path);
  out << "suite,check,params,lhs,rhs,constant,pass\n";
  for (const auto& r : rows)
    out << r.suite << ',' << r.check << ',' << r.params << ',' << fmt17(r.lhs) << ','
        << fmt17(r.rhs) << ',' << fmt17(r.constant) << ',' << (r.pass ? 1 : 0) << "\n";
}

void write_loja_csv(const std::string& path, const std::vector<LojasiewiczReport>& reports) {
  auto out = open_out(path);
  out << "family,R,lhs,rhs1,rhs2,rhs3,fitted_exponent,fitted_constant,pass,note\n";
  for (const auto& r : reports) {
    double t1 = r.rhs_terms.size() > 0 ? r.rhs_terms[0] : 0.0;
    double t2 = r.rhs_terms.size() > 1 ? r.rhs_terms[1] : 0.0;
    double t3 = r.rhs_terms.size() > 2 ? r.rhs_terms[2] : 0.0;
    out << r.family << ',' << fmt17(r.R) << ',' << fmt17(r.lhs) << ',' << fmt17(t1) << ','
        << fmt17(t2) << ',' << fmt17(t3) << ',' << fmt17(r.fitted_exponent) << ','
        << fmt17(r.fitted_constant) << ',' << (r.pass ? 1 : 0) << ',' << r.note << "\n";
  }
}

void write_scale_csv(const std::string& path, const std::vector<ScaleReport>& reports) {
  auto out = open_out(path);
  out << "t,r_ell,R_shrink,ratio,infinite\n";
  for (const auto& r : reports)
    out << fmt17(r.t) << ',' << fmt17(r.r_ell) << ',' << fmt17(r.R_shrink) << ','
        << fmt17(r.ratio) << ',' << (r.infinite ? 1 : 0) << "\n";
}

void write_uniqueness_csv(const std::string& path, const UniquenessReport& rep) {
  auto out = open_out(path);
  out << "axis_total_variation,axis_tv_tail,sqrt_increment_sum,sqrt_increment_tail,"
         "final_phi_l2,final_dC,axis_a,axis_b,axis_c,converged\n";
  out << fmt17(rep.axis_total_variation) << ',' << fmt17(rep.axis_tv_tail) << ','
      << fmt17(rep.sqrt_increment_sum) << ',' << fmt17(rep.sqrt_increment_tail) << ','
      << fmt17(rep.final_phi_l2) << ',' << fmt17(rep.final_dC) << ',' << fmt17(rep.final_axis[0])
      << ',' << fmt17(rep.final_axis[1]) << ',' << fmt17(rep.final_axis[2]) << ','
      << (rep.converged ? 1 : 0) << "\n";
}

void write_loglog_svg(const std::string& path, const std::vector<LogLogSeries>& series) {
  const int W = 640, Hgt = 480, margin = 60;
  double lxmin = 1e300, lxmax = -1e300, lymin = 1e300, lymax = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
      lxmin = std::min(lxmin, std::log10(s.x[i]));
      lxmax = std::max(lxmax, std::log10(s.x[i]));
      lymin = std::min(lymin, std::log10(s.y[i]));
      lymax = std::max(lymax, std::log10(s.y[i]));
    }
  if (lxmax <= lxmin) lxmax = lxmin + 1;
  if (lymax <= lymin) lymax = lymin + 1;
  auto px = [&](double lx) { return margin + (lx - lxmin) / (lxmax - lxmin) * (W - 2 * margin); };
  auto py = [&](double ly) { return Hgt - margin - (ly - lymin) / (lymax - lymin) * (Hgt - 2 * margin); };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hgt
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << Hgt - margin << "\" x2=\"" << W - margin
      << "\" y2=\"" << Hgt - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << Hgt - margin << "\" stroke=\"black\"/>\n";
  const char* colors[] = {"#1f6fb4", "#c23b22", "#2a9d5c", "#8e5bb4", "#b48b1f"};
  int ci = 0;
  for (const auto& s : series) {
    std::string col = colors[ci++ % 5];
    out << "<path fill=\"none\" stroke=\"" << col << "\" d=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
      out << (first ? "M" : "L") << px(std::log10(s.x[i])) << " " << py(std::log10(s.y[i])) << " ";
      first = false;
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0) || !(s.y[i] > 0)) continue;
      out << "<circle cx=\"" << px(std::log10(s.x[i])) << "\" cy=\"" << py(std::log10(s.y[i]))
          << "\" r=\"3\" fill=\"" << col << "\"/>\n";
    }
    out << "<text x=\"" << W - margin - 200 << "\" y=\"" << margin + 18 * ci << "\" fill=\"" << col
        << "\" font-size=\"13\">" << s.name << " slope " << fmt17(s.slope).substr(0, 6)
        << "</text>\n";
  }
  out << "<text x=\"" << W / 2 - 30 << "\" y=\"" << Hgt - 20
      << "\" font-size=\"13\">log10 x</text>\n";
  out << "<text x=\"12\" y=\"" << Hgt / 2 << "\" font-size=\"13\" transform=\"rotate(-90 16,"
      << Hgt / 2 << ")\">log10 y</text>\n</svg>\n";
}

}  // namespace shrinkerlab
