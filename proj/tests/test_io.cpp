#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "shrinkerlab/report_io.hpp"
#include "shrinkerlab/run.hpp"

using namespace shrinkerlab;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmpdir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / "shrinkerlab_tests" / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}
}  // namespace

TEST_CASE("config parsing, defaults and validation messages") {
  auto cfg = parse_config_text(
      "n_theta = 32\n"
      "hermite_cap = 16\n"
      "dt = 0.02\n"
      "steps = 5\n"
      "perturb = \"(0,2,0.05);(1,1,0.02,sin)\"\n"
      "# comment\n"
      "outdir = \"runs/demo\"\n");
  CHECK(cfg.n_theta == 32);
  CHECK(cfg.perturb.size() == 2);
  CHECK(cfg.perturb[1].parity == 1);
  CHECK(cfg.norm_radius == doctest::Approx(10.0));

  CHECK_THROWS_WITH_AS(parse_config_text("bogus_key = 1\n"),
                       doctest::Contains("unknown keys"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("dt = -1\n"), doctest::Contains("dt"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text("truncation = 4\n"), doctest::Contains("truncation"),
                       std::invalid_argument);
}

TEST_CASE("snapshot round trip preserves coefficients exactly") {
  auto d = make_discretization(16, 12, 12.0);
  GraphField u = tapered_mode(d, 0, 2);
  u *= 0.037;
  {
    GraphField m = tapered_mode(d, 1, 1, 1);
    m *= -0.011;
    u += m;
  }
  std::string path = tmpdir("snapshot") + "/state.json";
  write_snapshot(path, u, 1.25);
  Snapshot snap = read_snapshot(path);
  CHECK(snap.s == 1.25);
  REQUIRE(snap.u.coeff.size() == u.coeff.size());
  for (std::size_t i = 0; i < u.coeff.size(); ++i) CHECK(snap.u.coeff[i] == u.coeff[i]);
}

TEST_CASE("diagnostics CSV: pinned header and lossless read-back") {
  std::vector<SeriesRow> rows(3);
  rows[0].step = 0;
  rows[0].s = 0.0;
  rows[0].F = 1.5203563;
  rows[1].step = 10;
  rows[1].s = 0.1;
  rows[1].F = 1.52;
  rows[1].dC_R = 0.001234567890123456;
  rows[2].step = 20;
  rows[2].s = 0.2;
  rows[2].F = 1.519;
  std::string path = tmpdir("csv") + "/diag.csv";
  write_diagnostics_csv(path, rows);
  std::string text = slurp(path);
  CHECK(text.substr(0, text.find('\n')) ==
        "step,s,F,phi_L1_BR,phi_L2_BR,phi_L2,dFds,dC_R,r_cyl,R_shrink,axis_a,axis_b");
  auto back = read_diagnostics_csv(path);
  REQUIRE(back.size() == 3);
  CHECK(back[1].dC_R == rows[1].dC_R);
  CHECK(back[2].F == rows[2].F);
  CHECK(std::isinf(back[0].R_shrink));
}

TEST_CASE("simulate is byte-deterministic for a fixed config") {
  ExperimentConfig cfg;
  cfg.n_theta = 16;
  cfg.M = 12;
  cfg.steps = 30;
  cfg.cadence = 5;
  cfg.fit_cadence = 15;
  cfg.perturb = parse_perturbation("(0,2,0.05);(1,1,0.02,cos)");
  cfg.outdir = tmpdir("det_a");
  ReportBundle b1 = run_experiment(cfg);
  std::string d1 = slurp(b1.diagnostics_csv);
  std::string k1 = slurp(b1.kernel_csv);

  cfg.outdir = tmpdir("det_b");
  ReportBundle b2 = run_experiment(cfg);
  CHECK(slurp(b2.diagnostics_csv) == d1);
  CHECK(slurp(b2.kernel_csv) == k1);
  CHECK(b1.checks_pass);
}

TEST_CASE("run bundle contains snapshots, manifest and finite diagnostics") {
  ExperimentConfig cfg;
  cfg.n_theta = 16;
  cfg.M = 12;
  cfg.steps = 20;
  cfg.cadence = 5;
  cfg.fit_cadence = 10;
  cfg.outdir = tmpdir("bundle");
  ReportBundle b = run_experiment(cfg);  // exact cylinder run
  CHECK(std::filesystem::exists(b.outdir + "/snapshot_initial.json"));
  CHECK(std::filesystem::exists(b.outdir + "/snapshot_final.json"));
  CHECK(std::filesystem::exists(b.manifest_path));
  REQUIRE(!b.rows.empty());
  for (const auto& r : b.rows) {
    CHECK(r.F == doctest::Approx(std::sqrt(2.0 * M_PI / M_E)).epsilon(1e-10));
    CHECK(r.phi_l2 < 1e-12);
  }
  std::string man = slurp(b.manifest_path);
  CHECK(man.find("\"halt_reason\": \"\"") != std::string::npos);
}

TEST_CASE("graph breakdown leaves a partial bundle with the halt reason") {
  ExperimentConfig cfg;
  cfg.n_theta = 16;
  cfg.M = 12;
  cfg.steps = 4000;
  cfg.cadence = 50;
  cfg.fit_cadence = 200;
  cfg.dt = 0.02;
  cfg.stabilize = false;  // let the dilation mode run away
  cfg.perturb = parse_perturbation("(0,0,0.3)");
  cfg.outdir = tmpdir("halt");
  ReportBundle b = run_experiment(cfg);
  CHECK(!b.halt_reason.empty());
  CHECK(!b.checks_pass);
  std::string man = slurp(b.manifest_path);
  CHECK(man.find("graph bound exceeded") != std::string::npos);
}

TEST_CASE("log-log SVG has one path per family and slope labels") {
  LogLogSeries s1{"kernel", {1e-3, 1e-2, 1e-1}, {1e-6, 1e-4, 1e-2}, 2.0};
  LogLogSeries s2{"orthogonal", {1e-3, 1e-2, 1e-1}, {2e-5, 2e-3, 2e-1}, 2.0};
  std::string path = tmpdir("svg") + "/fits.svg";
  write_loglog_svg(path, {s1, s2});
  std::string text = slurp(path);
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') > 5);
  CHECK(text.find("kernel slope") != std::string::npos);
  CHECK(text.find("orthogonal slope") != std::string::npos);
  std::size_t first = text.find("<path");
  std::size_t second = text.find("<path", first + 1);
  CHECK(second != std::string::npos);
}

TEST_CASE("fmt17 round-trips doubles") {
  for (double v : {1.0, -0.3333333333333333, 1.52035e-17, 19.104973174542805}) {
    CHECK(std::stod(fmt17(v)) == v);
  }
  CHECK(fmt17(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(fmt17(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("SHRINKERLAB_OUT overrides the output root") {
  setenv("SHRINKERLAB_OUT", "/tmp/shrinkerlab_tests/envroot", 1);
  CHECK(resolve_outdir("runs/demo") == "/tmp/shrinkerlab_tests/envroot/runs/demo");
  unsetenv("SHRINKERLAB_OUT");
  CHECK(resolve_outdir("runs/demo") == "runs/demo");
}
