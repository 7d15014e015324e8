#include "shrinkerlab/surface.hpp"

#include <cmath>
#include <stdexcept>

#include "shrinkerlab/graph_ops.hpp"

namespace shrinkerlab {

namespace {

void fill_sample(SurfaceSample& s, const Discretization& d, const NodalPack& p,
                 const std::vector<double>& thetas, const std::vector<double>& ys,
                 double delta_frac) {
  const std::size_t NT = thetas.size(), NY = ys.size(), N = NT * NY;
  const double R = d.radius;
  s.thetas = thetas;
  s.ys = ys;
  s.x.resize(N);
  s.nrm.resize(N);
  s.xt.resize(N);
  s.xy.resize(N);
  s.g11.resize(N);
  s.g12.resize(N);
  s.g22.resize(N);
  s.ii11.resize(N);
  s.ii12.resize(N);
  s.ii22.resize(N);
  s.a11.resize(N);
  s.a12.resize(N);
  s.a22.resize(N);
  s.H.resize(N);
  s.phi.resize(N);
  s.A2.resize(N);
  s.tau11.resize(N);
  s.tau12.resize(N);
  s.tau22.resize(N);
  s.tau_mask.resize(N);
  s.delta_tau = delta_frac * std::sqrt(0.5 * d.k);

  par_for(N, [&](std::size_t idx) {
    const std::size_t i = idx / NY, q = idx % NY;
    const double th = thetas[i], yv = ys[q];
    const double ct = std::cos(th), st = std::sin(th);
    const double u = p.u[idx], ut = p.ut[idx], uy = p.uy[idx];
    const double utt = p.utt[idx], uty = p.uty[idx], uyy = p.uyy[idx];
    const double r = R + u;

    Vec3 X{r * ct, r * st, yv};
    Vec3 Xt{ut * ct - r * st, ut * st + r * ct, 0.0};
    Vec3 Xy{uy * ct, uy * st, 1.0};
    Vec3 Xtt{(utt - r) * ct - 2.0 * ut * st, (utt - r) * st + 2.0 * ut * ct, 0.0};
    Vec3 Xty{uty * ct - uy * st, uty * st + uy * ct, 0.0};
    Vec3 Xyy{uyy * ct, uyy * st, 0.0};

    Vec3 cr = cross(Xt, Xy);
    double cn = norm(cr);
    if (!(cn > 1e-300)) throw std::domain_error("embed_graph: degenerate tangent plane");
    Vec3 n = (1.0 / cn) * cr;
    // Orient away from the axis.
    if (n[0] * ct + n[1] * st < 0.0) n = -1.0 * n;

    double g11 = dot(Xt, Xt), g12 = dot(Xt, Xy), g22 = dot(Xy, Xy);
    double ii11 = dot(Xtt, n), ii12 = dot(Xty, n), ii22 = dot(Xyy, n);
    double det = g11 * g22 - g12 * g12;

    // Orthonormal frame e1 = Xt/sqrt(g11), e2 = Gram-Schmidt of Xy.
    double s1 = std::sqrt(g11);
    double c12 = g12 / g11;
    double ell = std::sqrt(std::max(g22 - g12 * c12, 1e-300));
    double A11 = ii11 / g11;
    double A12 = (ii12 - c12 * ii11) / (s1 * ell);
    double A22 = (ii22 - 2.0 * c12 * ii12 + c12 * c12 * ii11) / (ell * ell);

    double Hval = -(g22 * ii11 - 2.0 * g12 * ii12 + g11 * ii22) / det;
    double xn = dot(X, n);
    double phi = 0.5 * xn - Hval;
    double A2 = A11 * A11 + 2.0 * A12 * A12 + A22 * A22;

    s.x[idx] = X;
    s.nrm[idx] = n;
    s.xt[idx] = Xt;
    s.xy[idx] = Xy;
    s.g11[idx] = g11;
    s.g12[idx] = g12;
    s.g22[idx] = g22;
    s.ii11[idx] = ii11;
    s.ii12[idx] = ii12;
    s.ii22[idx] = ii22;
    s.a11[idx] = A11;
    s.a12[idx] = A12;
    s.a22[idx] = A22;
    s.H[idx] = Hval;
    s.phi[idx] = phi;
    s.A2[idx] = A2;
    bool ok = Hval > s.delta_tau;
    s.tau_mask[idx] = ok ? 1 : 0;
    s.tau11[idx] = ok ? A11 / Hval : 0.0;
    s.tau12[idx] = ok ? A12 / Hval : 0.0;
    s.tau22[idx] = ok ? A22 / Hval : 0.0;
  });
}

}  // namespace

SurfaceSample embed_graph(const GraphField& u, double delta_frac) {
  const auto& d = *u.disc;
  NodalPack p = eval_pack(u);
  SurfaceSample s;
  s.disc = u.disc;
  s.quadrature_grid = true;
  fill_sample(s, d, p, d.theta, d.y, delta_frac);

  const std::size_t N = s.n_nodes();
  s.gauss_w.resize(N);
  s.area_w.resize(N);
  const double dth = 2.0 * M_PI / d.n_theta;
  for (int i = 0; i < d.n_theta; ++i)
    for (int q = 0; q < d.Q; ++q) {
      std::size_t idx = d.node_index(i, q);
      double det = s.g11[idx] * s.g22[idx] - s.g12[idx] * s.g12[idx];
      double sqrtg = std::sqrt(std::max(det, 0.0));
      double y2 = d.y[q] * d.y[q];
      double x2 = dot(s.x[idx], s.x[idx]);
      // yw carries e^{-y^2/4}; exponents are combined before exponentiating.
      s.gauss_w[idx] = sqrtg * dth * d.yw[q] * std::exp((y2 - x2) / 4.0);
      s.area_w[idx] = sqrtg * dth * d.yw[q] * std::exp(y2 / 4.0);
    }
  return s;
}

SurfaceSample embed_graph_on(const GraphField& u, const std::vector<double>& thetas,
                             const std::vector<double>& ys, double delta_frac) {
  NodalPack p;
  p.u = u.nodal_at(thetas, ys, 0, 0);
  p.ut = u.nodal_at(thetas, ys, 1, 0);
  p.uy = u.nodal_at(thetas, ys, 0, 1);
  p.utt = u.nodal_at(thetas, ys, 2, 0);
  p.uty = u.nodal_at(thetas, ys, 1, 1);
  p.uyy = u.nodal_at(thetas, ys, 0, 2);
  window_pack(*u.disc, ys, p);
  SurfaceSample s;
  s.disc = u.disc;
  s.quadrature_grid = false;
  fill_sample(s, *u.disc, p, thetas, ys, delta_frac);
  return s;
}

double integrate_gauss(const SurfaceSample& s, const std::vector<double>& f, double R) {
  if (!s.quadrature_grid) throw std::invalid_argument("integrate_gauss needs quadrature grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (R >= 0 && dot(s.x[i], s.x[i]) > R * R) continue;
    acc += f[i] * s.gauss_w[i];
  }
  return acc;
}

double surface_volume(const SurfaceSample& s, double R) {
  if (!s.quadrature_grid) throw std::invalid_argument("surface_volume needs quadrature grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < s.area_w.size(); ++i) {
    if (R >= 0 && dot(s.x[i], s.x[i]) > R * R) continue;
    acc += s.area_w[i];
  }
  return acc;
}

double phi_norm(const SurfaceSample& s, int p, double R) {
  std::vector<double> f(s.phi.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = (p == 1) ? std::abs(s.phi[i]) : s.phi[i] * s.phi[i];
  double v = integrate_gauss(s, f, R);
  return (p == 1) ? v : std::sqrt(v);
}

// ---------------------------------------------------------------------------
// Covariant calculus (spectral path).

namespace {

// Differentiates "constant cylinder background + window-supported deviation".
// The background is subtracted before projecting (its derivative is zero) and
// the deviation is windowed on both sides of the projection: values beyond
// the truncation are representation artifacts and would otherwise feed back
// through repeated project/evaluate cycles with h_m(y) amplification.
std::vector<double> nodal_derivative(const DiscPtr& disc, const std::vector<double>& vals,
                                     int dt, int dy, double background = 0.0) {
  std::vector<double> v(vals.size());
  for (int i = 0; i < disc->n_theta; ++i)
    for (int q = 0; q < disc->Q; ++q) {
      std::size_t idx = disc->node_index(i, q);
      v[idx] = disc->y_in_window[q] ? vals[idx] - background : 0.0;
    }
  GraphField f = field_from_nodal(disc, v);
  auto out = f.nodal(dt, dy);
  for (int i = 0; i < disc->n_theta; ++i)
    for (int q = 0; q < disc->Q; ++q)
      if (!disc->y_in_window[q]) out[disc->node_index(i, q)] = 0.0;
  return out;
}

struct CovCtx {
  const SurfaceSample* s;
  std::vector<double> ginv11, ginv12, ginv22;
  // gamma[c][a][b], symmetric in (a,b)
  std::vector<double> gamma[2][2][2];

  const std::vector<double>& ginv(int a, int b) const {
    if (a == 0 && b == 0) return ginv11;
    if (a == 1 && b == 1) return ginv22;
    return ginv12;
  }
};

CovCtx make_cov_ctx(const SurfaceSample& s) {
  if (!s.quadrature_grid || !s.disc)
    throw std::invalid_argument("covariant calculus needs a quadrature-grid sample");
  CovCtx c;
  c.s = &s;
  const std::size_t N = s.n_nodes();
  c.ginv11.resize(N);
  c.ginv12.resize(N);
  c.ginv22.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    double det = s.g11[i] * s.g22[i] - s.g12[i] * s.g12[i];
    c.ginv11[i] = s.g22[i] / det;
    c.ginv12[i] = -s.g12[i] / det;
    c.ginv22[i] = s.g11[i] / det;
  }
  // dg[d][ab]; ab in {11,12,22}; cylinder metric background (2, 0, 1)
  std::vector<double> dg[2][3];
  const std::vector<double>* gcomp[3] = {&s.g11, &s.g12, &s.g22};
  const double gbg[3] = {2.0, 0.0, 1.0};
  for (int d = 0; d < 2; ++d)
    for (int ab = 0; ab < 3; ++ab)
      dg[d][ab] = nodal_derivative(s.disc, *gcomp[ab], d == 0 ? 1 : 0, d == 0 ? 0 : 1, gbg[ab]);
  auto gidx = [](int a, int b) { return a + b; };  // 00->0, 01/10->1, 11->2
  for (int cu = 0; cu < 2; ++cu)
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b) {
        std::vector<double> out(N);
        for (std::size_t i = 0; i < N; ++i) {
          double acc = 0.0;
          for (int d = 0; d < 2; ++d) {
            double gcd = c.ginv(cu, d)[i];
            acc += 0.5 * gcd *
                   (dg[a][gidx(d, b)][i] + dg[b][gidx(d, a)][i] - dg[d][gidx(a, b)][i]);
          }
          out[i] = acc;
        }
        c.gamma[cu][a][b] = out;
        if (a != b) c.gamma[cu][b][a] = c.gamma[cu][a][b];
      }
  return c;
}

// Dense small tensor of rank r over the 2d parameter space; component index
// is a base-2 multi-index, most significant digit first.
struct NodalTensor {
  int rank = 0;
  std::vector<std::vector<double>> comp;  // size 2^rank
  std::vector<double> bg;                 // cylinder background per component
};

int tindex(const std::vector<int>& I) {
  int idx = 0;
  for (int a : I) idx = idx * 2 + a;
  return idx;
}

NodalTensor cov_deriv(const CovCtx& ctx, const NodalTensor& T) {
  const auto& s = *ctx.s;
  const std::size_t N = s.n_nodes();
  NodalTensor out;
  out.rank = T.rank + 1;
  out.comp.assign(1 << out.rank, std::vector<double>(N, 0.0));

  // partials of every component
  std::vector<std::vector<double>> dT[2];
  for (int d = 0; d < 2; ++d) {
    dT[d].resize(T.comp.size());
    for (std::size_t ci = 0; ci < T.comp.size(); ++ci)
      dT[d][ci] = nodal_derivative(s.disc, T.comp[ci], d == 0 ? 1 : 0, d == 0 ? 0 : 1,
                                   T.bg.empty() ? 0.0 : T.bg[ci]);
  }

  std::vector<int> I(out.rank, 0);
  for (int flat = 0; flat < (1 << out.rank); ++flat) {
    for (int p = 0; p < out.rank; ++p) I[p] = (flat >> (out.rank - 1 - p)) & 1;
    int cdir = I[0];  // new (first) index is the derivative direction
    std::vector<int> J(I.begin() + 1, I.end());
    auto& dst = out.comp[flat];
    const auto& src = dT[cdir][tindex(J)];
    for (std::size_t i = 0; i < N; ++i) dst[i] = src[i];
    for (int p = 0; p < T.rank; ++p) {
      for (int d = 0; d < 2; ++d) {
        std::vector<int> Jd = J;
        Jd[p] = d;
        const auto& gam = ctx.gamma[d][cdir][J[p]];
        const auto& tc = T.comp[tindex(Jd)];
        for (std::size_t i = 0; i < N; ++i) dst[i] -= gam[i] * tc[i];
      }
    }
  }
  return out;
}

std::vector<double> tensor_norm2(const CovCtx& ctx, const NodalTensor& T) {
  const std::size_t N = ctx.s->n_nodes();
  std::vector<double> out(N, 0.0);
  int ncomp = 1 << T.rank;
  std::vector<int> I(T.rank), J(T.rank);
  for (int fi = 0; fi < ncomp; ++fi) {
    for (int p = 0; p < T.rank; ++p) I[p] = (fi >> (T.rank - 1 - p)) & 1;
    for (int fj = 0; fj < ncomp; ++fj) {
      for (int p = 0; p < T.rank; ++p) J[p] = (fj >> (T.rank - 1 - p)) & 1;
      const auto& ti = T.comp[fi];
      const auto& tj = T.comp[fj];
      for (std::size_t nidx = 0; nidx < N; ++nidx) {
        double fac = ti[nidx] * tj[nidx];
        if (fac == 0.0) continue;
        for (int p = 0; p < T.rank; ++p) fac *= ctx.ginv(I[p], J[p])[nidx];
        out[nidx] += fac;
      }
    }
  }
  return out;
}

NodalTensor second_form_tensor(const SurfaceSample& s) {
  NodalTensor T;
  T.rank = 2;
  T.comp = {s.ii11, s.ii12, s.ii12, s.ii22};
  const double R = std::sqrt(2.0);
  T.bg = {-R, 0.0, 0.0, 0.0};
  return T;
}

}  // namespace

std::vector<double> grad_tau_norm2(const SurfaceSample& s) {
  CovCtx ctx = make_cov_ctx(s);
  const std::size_t N = s.n_nodes();
  NodalTensor tau;
  tau.rank = 2;
  std::vector<double> t11(N), t12(N), t22(N);
  for (std::size_t i = 0; i < N; ++i) {
    t11[i] = s.ii11[i] / s.H[i];
    t12[i] = s.ii12[i] / s.H[i];
    t22[i] = s.ii22[i] / s.H[i];
  }
  tau.comp = {t11, t12, t12, t22};
  tau.bg = {-2.0, 0.0, 0.0, 0.0};  // ii11/H on the cylinder
  return tensor_norm2(ctx, cov_deriv(ctx, tau));
}

std::vector<double> hess_phi_frobenius(const SurfaceSample& s) {
  CovCtx ctx = make_cov_ctx(s);
  NodalTensor f;
  f.rank = 0;
  f.comp = {s.phi};
  auto h2 = tensor_norm2(ctx, cov_deriv(ctx, cov_deriv(ctx, f)));
  for (double& v : h2) v = std::sqrt(std::max(v, 0.0));
  return h2;
}

std::vector<double> nabla_A_norm(const SurfaceSample& s, int order) {
  if (order < 1 || order > 2) throw std::invalid_argument("nabla_A_norm: order 1 or 2");
  CovCtx ctx = make_cov_ctx(s);
  NodalTensor T = second_form_tensor(s);
  for (int i = 0; i < order; ++i) T = cov_deriv(ctx, T);
  auto n2 = tensor_norm2(ctx, T);
  for (double& v : n2) v = std::sqrt(std::max(v, 0.0));
  return n2;
}

std::vector<double> surface_L_apply(const SurfaceSample& s, const std::vector<double>& f) {
  CovCtx ctx = make_cov_ctx(s);
  const std::size_t N = s.n_nodes();
  NodalTensor f0;
  f0.rank = 0;
  f0.comp = {f};
  NodalTensor df = cov_deriv(ctx, f0);
  NodalTensor hess = cov_deriv(ctx, df);
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) {
    double lap = ctx.ginv11[i] * hess.comp[0][i] + 2.0 * ctx.ginv12[i] * hess.comp[1][i] +
                 ctx.ginv22[i] * hess.comp[3][i];
    double xt1 = dot(s.x[i], s.xt[i]), xt2 = dot(s.x[i], s.xy[i]);
    double gx1 = ctx.ginv11[i] * xt1 + ctx.ginv12[i] * xt2;
    double gx2 = ctx.ginv12[i] * xt1 + ctx.ginv22[i] * xt2;
    double drift = gx1 * df.comp[0][i] + gx2 * df.comp[1][i];
    out[i] = lap - 0.5 * drift + (s.A2[i] + 0.5) * f[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference Simons residual.

namespace {

bool uniform_spacing(const std::vector<double>& v, double& h) {
  if (v.size() < 2) return false;
  h = v[1] - v[0];
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (std::abs((v[i + 1] - v[i]) - h) > 1e-9 * std::abs(h)) return false;
  return true;
}

}  // namespace

SimonsResidual simons_trace_residual(const SurfaceSample& s) {
  const std::size_t NT = s.thetas.size(), NY = s.ys.size();
  double ht = 0.0, hy = 0.0;
  if (!uniform_spacing(s.thetas, ht) || !uniform_spacing(s.ys, hy))
    throw std::invalid_argument("simons_trace_residual: needs uniform grids");
  if (NY < 7) throw std::domain_error("simons_trace_residual: insufficient interior margin");

  auto at = [&](std::size_t i, std::size_t q) { return i * NY + q; };
  auto dth = [&](const std::vector<double>& f, std::size_t i, std::size_t q) {
    std::size_t ip = (i + 1) % NT, im = (i + NT - 1) % NT;
    return (f[at(ip, q)] - f[at(im, q)]) / (2.0 * ht);
  };
  auto dyc = [&](const std::vector<double>& f, std::size_t i, std::size_t q) {
    return (f[at(i, q + 1)] - f[at(i, q - 1)]) / (2.0 * hy);
  };

  // FD tangents and metric from the sampled positions only.
  const std::size_t N = NT * NY;
  std::vector<double> e11(N, 0.0), e12(N, 0.0), e22(N, 0.0), sq(N, 0.0);
  std::vector<double> i11(N), i12(N), i22(N);
  for (std::size_t i = 0; i < NT; ++i)
    for (std::size_t q = 1; q + 1 < NY; ++q) {
      std::size_t ip = (i + 1) % NT, im = (i + NT - 1) % NT;
      Vec3 T1 = (1.0 / (2.0 * ht)) * (s.x[at(ip, q)] - s.x[at(im, q)]);
      Vec3 T2 = (1.0 / (2.0 * hy)) * (s.x[at(i, q + 1)] - s.x[at(i, q - 1)]);
      std::size_t idx = at(i, q);
      e11[idx] = dot(T1, T1);
      e12[idx] = dot(T1, T2);
      e22[idx] = dot(T2, T2);
      double det = e11[idx] * e22[idx] - e12[idx] * e12[idx];
      sq[idx] = std::sqrt(std::max(det, 0.0));
      i11[idx] = e22[idx] / det;
      i12[idx] = -e12[idx] / det;
      i22[idx] = e11[idx] / det;
    }

  // Divergence-form Laplacian with nested central differences.
  auto laplace = [&](const std::vector<double>& f, std::vector<double>& out) {
    std::vector<double> P1(N, 0.0), P2(N, 0.0);
    for (std::size_t i = 0; i < NT; ++i)
      for (std::size_t q = 1; q + 1 < NY; ++q) {
        std::size_t idx = at(i, q);
        double f1 = dth(f, i, q), f2 = dyc(f, i, q);
        P1[idx] = sq[idx] * (i11[idx] * f1 + i12[idx] * f2);
        P2[idx] = sq[idx] * (i12[idx] * f1 + i22[idx] * f2);
      }
    for (std::size_t i = 0; i < NT; ++i)
      for (std::size_t q = 2; q + 2 < NY; ++q) {
        std::size_t idx = at(i, q);
        out[idx] = (dth(P1, i, q) + dyc(P2, i, q)) / sq[idx];
      }
  };

  std::vector<double> lapH(N, 0.0), lapPhi(N, 0.0);
  laplace(s.H, lapH);
  laplace(s.phi, lapPhi);

  SimonsResidual res;
  res.values.assign(N, 0.0);
  res.interior.assign(N, 0);
  for (std::size_t i = 0; i < NT; ++i)
    for (std::size_t q = 2; q + 2 < NY; ++q) {
      std::size_t idx = at(i, q);
      double h1 = dth(s.H, i, q), h2 = dyc(s.H, i, q);
      double xt1 = dot(s.x[idx], (1.0 / (2.0 * ht)) * (s.x[at((i + 1) % NT, q)] - s.x[at((i + NT - 1) % NT, q)]));
      double xt2 = dot(s.x[idx], (1.0 / (2.0 * hy)) * (s.x[at(i, q + 1)] - s.x[at(i, q - 1)]));
      double gx1 = i11[idx] * xt1 + i12[idx] * xt2;
      double gx2 = i12[idx] * xt1 + i22[idx] * xt2;
      double drift = gx1 * h1 + gx2 * h2;
      double LH = lapH[idx] - 0.5 * drift + (s.A2[idx] + 0.5) * s.H[idx];
      double r = LH - s.H[idx] + lapPhi[idx] + s.phi[idx] * s.A2[idx];
      res.values[idx] = r;
      res.interior[idx] = 1;
      res.max_interior = std::max(res.max_interior, std::abs(r));
    }
  return res;
}

EffectiveBoundReport effective_bound_report(const SurfaceSample& s, double R, double band,
                                            double delta) {
  if (delta < 0) delta = s.delta_tau;
  EffectiveBoundReport rep;
  for (std::size_t i = 0; i < s.n_nodes(); ++i) {
    if (dot(s.x[i], s.x[i]) > R * R) continue;
    if (s.H[i] <= delta) {
      rep.precondition_ok = false;
      rep.bad_theta = s.thetas[i / s.ys.size()];
      rep.bad_y = s.ys[i % s.ys.size()];
      return rep;
    }
  }
  auto gt2 = grad_tau_norm2(s);
  rep.lhs = integrate_gauss(s, gt2, R - band);
  rep.term_vol = surface_volume(s, R) * std::exp(-(R - band) * (R - band) / 4.0) / (band * band);
  auto hp = hess_phi_frobenius(s);
  std::vector<double> integrand(hp.size());
  for (std::size_t i = 0; i < hp.size(); ++i) integrand[i] = hp[i] + std::abs(s.phi[i]);
  rep.term_phi = integrate_gauss(s, integrand, R);
  double denom = rep.term_vol + rep.term_phi;
  rep.ratio = (denom > 0) ? rep.lhs / denom : 0.0;
  return rep;
}

}  // namespace shrinkerlab
