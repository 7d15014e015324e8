#include <doctest.h>

#include <cmath>

#include "shrinkerlab/spectral.hpp"
#include "shrinkerlab/surface.hpp"

using namespace shrinkerlab;

namespace {
DiscPtr disc() {
  static DiscPtr d = make_discretization(32, 24, 12.0);
  return d;
}

std::vector<double> uniform(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1.0);
  return v;
}
}  // namespace

TEST_CASE("embedded cylinder: phi = 0, H = sqrt(1/2), |A|^2 = 1/2, normals radial") {
  GraphField u(disc());
  SurfaceSample s = embed_graph(u);
  for (std::size_t i = 0; i < s.n_nodes(); ++i) {
    CHECK(std::abs(s.phi[i]) < 1e-12);
    CHECK(s.H[i] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
    CHECK(s.A2[i] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(norm(s.nrm[i]) - 1.0) < 1e-13);
    // tau is well-defined and parallel on the cylinder
    CHECK(s.tau_mask[i] == 1);
  }
  // normality against the tangent directions
  for (std::size_t i = 0; i < s.n_nodes(); ++i) {
    CHECK(std::abs(dot(s.nrm[i], s.xt[i])) < 1e-10);
    CHECK(std::abs(dot(s.nrm[i], s.xy[i])) < 1e-10);
  }
}

TEST_CASE("constant offset graph: phi matches the radial closed form") {
  double off = 0.25;
  GraphField u = field_from_function(disc(), [&](double, double) { return off; });
  SurfaceSample s = embed_graph(u);
  double expect = (std::sqrt(2.0) + off) / 2.0 - 1.0 / (std::sqrt(2.0) + off);
  for (std::size_t i = 0; i < s.n_nodes(); i += 7) {
    if (std::abs(s.ys[i % s.ys.size()]) > 8.0) continue;  // outside: exact cylinder
    CHECK(s.phi[i] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("phi is definitional in the sample") {
  GraphField u = tapered_mode(disc(), 1, 2);
  u *= 0.03;
  SurfaceSample s = embed_graph(u);
  for (std::size_t i = 0; i < s.n_nodes(); i += 11) {
    double recomputed = 0.5 * dot(s.x[i], s.nrm[i]) - s.H[i];
    CHECK(recomputed == s.phi[i]);
  }
}

TEST_CASE("gaussian area weights reproduce closed-form integrals") {
  GraphField u(disc());
  SurfaceSample s = embed_graph(u);
  double total = integrate_gauss(s, std::vector<double>(s.n_nodes(), 1.0));
  double expect = 4.0 * std::pow(M_PI, 1.5) * std::sqrt(2.0) * std::exp(-0.5);
  CHECK(total == doctest::Approx(expect).epsilon(1e-12));

  // Volume of B_R on the cylinder: 2 pi sqrt(2) * 2 sqrt(R^2 - 2)
  double R = 6.0;
  double vol = surface_volume(s, R);
  double expect_vol = 2.0 * M_PI * std::sqrt(2.0) * 2.0 * std::sqrt(R * R - 2.0);
  CHECK(vol == doctest::Approx(expect_vol).epsilon(6e-2));  // y-cut lands between nodes
}

TEST_CASE("covariant machinery: grad tau vanishes on the cylinder") {
  GraphField u(disc());
  SurfaceSample s = embed_graph(u);
  auto gt2 = grad_tau_norm2(s);
  double worst = 0.0;
  for (std::size_t i = 0; i < gt2.size(); ++i)
    if (std::abs(s.ys[i % s.ys.size()]) < 8.0) worst = std::max(worst, std::abs(gt2[i]));
  CHECK(worst < 1e-12);
}

TEST_CASE("surface L on the cylinder matches the diagonal spectral action") {
  auto d = disc();
  GraphField u(d);
  SurfaceSample s = embed_graph(u);
  // Route check: the covariant surface operator against the diagonal
  // spectral action, on the same band-limited field.
  GraphField fm = tapered_mode(d, 1, 1);
  auto f = fm.nodal();
  auto Lf = surface_L_apply(s, f);
  auto Lf_diag = apply_L(fm).nodal();
  double worst = 0.0;
  for (int i = 0; i < d->n_theta; ++i)
    for (int q = 0; q < d->Q; ++q)
      if (std::abs(d->y[q]) < 8.0)
        worst = std::max(worst, std::abs(Lf[d->node_index(i, q)] - Lf_diag[d->node_index(i, q)]));
  // The window re-projection of the taper's coefficient tail sets the
  // machinery's working precision at this resolution.
  CHECK(worst < 1e-4);

  // f = 1: L f = f on the cylinder (the window truncation of the constant
  // costs a weighted-tail error only).
  std::vector<double> one(s.n_nodes(), 1.0);
  auto Lone = surface_L_apply(s, one);
  for (int i = 0; i < d->n_theta; ++i)
    CHECK(Lone[d->node_index(i, d->Q / 2)] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("simons residual vanishes identically on the cylinder") {
  GraphField u(disc());
  auto s = embed_graph_on(u, uniform(0, 2 * M_PI * (1 - 1.0 / 48), 48), uniform(-4, 4, 49));
  auto res = simons_trace_residual(s);
  CHECK(res.max_interior < 1e-10);
}

TEST_CASE("simons residual converges at second order on a curved graph") {
  auto d = disc();
  GraphField u = tapered_mode(d, 0, 2);
  u *= 0.02 * 12.47;  // roughly 0.02 (y^2 - 2) in raw units
  auto resid_at = [&](int N) {
    auto th = uniform(0, 2 * M_PI * (1 - 1.0 / N), N);
    auto yy = uniform(-4, 4, 2 * N + 1);
    return simons_trace_residual(embed_graph_on(u, th, yy)).max_interior;
  };
  double r24 = resid_at(24), r48 = resid_at(48), r96 = resid_at(96);
  double rate1 = r24 / r48, rate2 = r48 / r96;
  INFO("residuals ", r24, " ", r48, " ", r96);
  CHECK(rate1 > 3.0);
  CHECK(rate2 > 3.0);
  CHECK(rate1 < 5.5);
}

TEST_CASE("simons residual needs an interior margin") {
  GraphField u(disc());
  auto s = embed_graph_on(u, uniform(0, 2 * M_PI * (1 - 1.0 / 8), 8), uniform(-1, 1, 5));
  CHECK_THROWS_AS(simons_trace_residual(s), std::domain_error);
}

TEST_CASE("effective bound: cylinder lhs is zero, phi terms drop out") {
  GraphField u(disc());
  SurfaceSample s = embed_graph(u);
  auto rep = effective_bound_report(s, 6.0, 1.0);
  CHECK(rep.precondition_ok);
  CHECK(rep.lhs < 1e-14);
  CHECK(rep.term_phi < 1e-10);
  CHECK(rep.term_vol > 0.0);
}

TEST_CASE("effective bound: fitted constant finite on a perturbed graph") {
  auto d = disc();
  GraphField u = tapered_mode(d, 1, 2);
  u *= 0.02;
  {
    GraphField w = tapered_mode(d, 2, 1);
    w *= 0.01;
    u += w;
  }
  SurfaceSample s = embed_graph(u);
  auto rep = effective_bound_report(s, 6.0, 1.0);
  CHECK(rep.precondition_ok);
  CHECK(rep.lhs > 0.0);
  CHECK(std::isfinite(rep.ratio));
  // refinement stability
  auto d2 = make_discretization(48, 36, 12.0);
  GraphField u2 = tapered_mode(d2, 1, 2);
  u2 *= 0.02;
  {
    GraphField w = tapered_mode(d2, 2, 1);
    w *= 0.01;
    u2 += w;
  }
  auto rep2 = effective_bound_report(embed_graph(u2), 6.0, 1.0);
  CHECK(rep2.ratio == doctest::Approx(rep.ratio).epsilon(0.05));
}

TEST_CASE("effective bound reports the H <= delta location") {
  // A synthetic sample with H forced nonpositive at one node.
  GraphField u(disc());
  SurfaceSample s = embed_graph(u);
  s.H[s.idx(0, s.ys.size() / 2)] = 0.0;  // a node inside B_R
  auto rep = effective_bound_report(s, 6.0, 1.0);
  CHECK(!rep.precondition_ok);
}
