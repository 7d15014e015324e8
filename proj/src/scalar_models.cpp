#include "shrinkerlab/scalar_models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace shrinkerlab {

long DecaySequence::first_violation() const {
  const auto& f = values;
  for (std::size_t t = 1; t + 1 < f.size(); ++t) {
    if (f[t] > f[t - 1] || f[t] < 0.0) return static_cast<long>(t);
    if (K * std::pow(f[t], 1.0 + eps) > f[t - 1] - f[t + 1] + 1e-15 * f[0]) return static_cast<long>(t);
  }
  return -1;
}

DecayBound discrete_decay_bound(const DecaySequence& seq) {
  long bad = seq.first_violation();
  if (bad >= 0)
    throw std::invalid_argument("discrete_decay_bound: inadmissible at t = " + std::to_string(bad));
  const auto& f = seq.values;
  DecayBound out;
  if (f.empty()) throw std::invalid_argument("discrete_decay_bound: empty sequence");
  if (!std::isfinite(f[0])) throw std::invalid_argument("discrete_decay_bound: non-finite data");
  if (f[0] <= 0.0) {  // identically zero: any constant certifies the decay
    out.C = 0.0;
    out.verified = true;
    return out;
  }
  // Normalize so g(0) <= 1 and the constant in front of g^{1+eps} is >= 1.
  double C0 = std::max(f[0], std::pow(seq.K, -1.0 / seq.eps));
  double g0 = f[0] / C0;
  double t0 = 4.0 * std::pow(2.0, seq.eps) * std::pow(g0, -seq.eps) / seq.eps + 2.0;
  double Chat = g0 * std::pow(t0, 1.0 / seq.eps);
  out.C = C0 * Chat;
  out.verified = true;
  for (std::size_t t = 1; t < f.size(); ++t) {
    double bound = out.C * std::pow(static_cast<double>(t), -1.0 / seq.eps);
    if (f[t] > bound * (1.0 + 1e-12)) {
      out.verified = false;
      break;
    }
  }
  return out;
}

SqrtIncrementSums sqrt_increment_sum(const DecaySequence& seq) {
  if (seq.eps >= 1.0)
    throw std::invalid_argument("sqrt_increment_sum: requires eps < 1");
  long bad = seq.first_violation();
  if (bad >= 0)
    throw std::invalid_argument("sqrt_increment_sum: inadmissible at t = " + std::to_string(bad));
  const auto& f = seq.values;
  SqrtIncrementSums out;
  out.p = 0.5 * (1.0 + 1.0 / seq.eps);
  double acc = 0.0;
  std::size_t nstep = f.size() >= 2 ? f.size() - 1 : 0;
  // Cauchy probe: increments over the last tenth of the observed range.
  std::size_t tail_from = nstep - std::min(nstep, std::max<std::size_t>(nstep / 10, 10));
  for (std::size_t j = 1; j < f.size(); ++j) {
    double inc = std::sqrt(std::max(f[j - 1] - f[j], 0.0));
    acc += inc;
    out.partial.push_back(acc);
    if (j >= tail_from) out.tail += inc;
    out.weighted_sum += std::max(f[j - 1] - f[j], 0.0) * std::pow(static_cast<double>(j), out.p);
  }
  out.total = acc;
  double zeta = 0.0;
  std::size_t N = f.size();
  for (std::size_t j = 1; j <= N; ++j) zeta += std::pow(static_cast<double>(j), -out.p);
  zeta += std::pow(static_cast<double>(N), 1.0 - out.p) / (out.p - 1.0);
  out.zeta_bound = zeta;
  out.certificate = std::sqrt(out.weighted_sum * out.zeta_bound);
  return out;
}

DecaySequence make_admissible_sequence(int n, double eps, double K, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&]() { return (rng() >> 11) * 0x1.0p-53; };
  DecaySequence seq;
  seq.eps = eps;
  seq.K = K;
  seq.values.assign(n + 1, 0.0);
  auto& f = seq.values;
  // Tiny terminal values keep the square-root increment tail well below the
  // 1e-6 verification tolerance; the magnitude varies for corpus diversity.
  f[n] = std::pow(10.0, -16.0 + static_cast<double>(seed % 3)) * (1.0 + uni());
  f[n - 1] = f[n] * (1.0 + 0.2 * uni());
  for (int t = n - 1; t >= 1; --t) {
    double need = std::max(f[t], f[t + 1] + K * std::pow(f[t], 1.0 + eps));
    f[t - 1] = need + 0.05 * uni() * f[t];
  }
  // The backwards recursion can grow fast; rescaling by f(0) preserves
  // admissibility with the adjusted constant K f(0)^eps.
  if (f[0] > 1.0) {
    double c = f[0];
    seq.K = K * std::pow(c, eps);
    for (double& v : f) v /= c;
  }
  return seq;
}

double ModelFunction::value(const std::vector<double>& x) const {
  double acc = 0.0;
  for (std::size_t t = 0; t < coeff.size(); ++t) {
    double term = coeff[t];
    for (int i = 0; i < dim; ++i)
      for (int e = 0; e < expo[t][i]; ++e) term *= x[i];
    acc += term;
  }
  return acc;
}

std::vector<double> ModelFunction::gradient(const std::vector<double>& x) const {
  std::vector<double> g(dim, 0.0);
  for (std::size_t t = 0; t < coeff.size(); ++t) {
    for (int d = 0; d < dim; ++d) {
      if (expo[t][d] == 0) continue;
      double term = coeff[t] * expo[t][d];
      for (int i = 0; i < dim; ++i) {
        int e = expo[t][i] - (i == d ? 1 : 0);
        for (int j = 0; j < e; ++j) term *= x[i];
      }
      g[d] += term;
    }
  }
  return g;
}

std::vector<double> ModelFunction::hessian_at_zero() const {
  std::vector<double> h(std::size_t(dim) * dim, 0.0);
  for (std::size_t t = 0; t < coeff.size(); ++t) {
    int total = 0;
    for (int i = 0; i < dim; ++i) total += expo[t][i];
    if (total != 2) continue;
    for (int i = 0; i < dim; ++i) {
      if (expo[t][i] == 2) h[i * dim + i] += 2.0 * coeff[t];
      for (int j = i + 1; j < dim; ++j)
        if (expo[t][i] == 1 && expo[t][j] == 1) {
          h[i * dim + j] += coeff[t];
          h[j * dim + i] += coeff[t];
        }
    }
  }
  return h;
}

ModelFunction parse_polynomial(int dim,
                               const std::vector<std::pair<double, std::vector<int>>>& terms) {
  ModelFunction f;
  f.dim = dim;
  for (const auto& [c, e] : terms) {
    if (static_cast<int>(e.size()) != dim)
      throw std::invalid_argument("polynomial term arity mismatch");
    f.coeff.push_back(c);
    f.expo.push_back(e);
  }
  return f;
}

namespace {

std::vector<double> rk4_step(const ModelFunction& f, const std::vector<double>& x, double h) {
  auto rhs = [&](const std::vector<double>& p) {
    auto g = f.gradient(p);
    for (double& v : g) v = -v;
    return g;
  };
  int d = f.dim;
  auto k1 = rhs(x);
  std::vector<double> tmp(d);
  for (int i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  auto k2 = rhs(tmp);
  for (int i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  auto k3 = rhs(tmp);
  for (int i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
  auto k4 = rhs(tmp);
  std::vector<double> out(d);
  for (int i = 0; i < d; ++i)
    out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

double grad_norm(const ModelFunction& f, const std::vector<double>& x) {
  double s = 0.0;
  for (double v : f.gradient(x)) s += v * v;
  return std::sqrt(s);
}

}  // namespace

GradientFlowResult ode_gradient_flow(const ModelFunction& f, const std::vector<double>& x0,
                                     double T, double domain_radius, double tol) {
  GradientFlowResult res;
  std::vector<double> x = x0;
  double t = 0.0, h = 1e-3;
  res.times.push_back(0.0);
  res.traj.push_back(x);
  res.fvals.push_back(f.value(x));
  while (t < T) {
    h = std::min(h, T - t);
    auto full = rk4_step(f, x, h);
    auto xmid = rk4_step(f, x, 0.5 * h);
    auto half = rk4_step(f, xmid, 0.5 * h);
    double err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::abs(full[i] - half[i]));
    double scale = tol * (1.0 + std::abs(res.fvals.back()));
    if (err > scale && h > 1e-12) {
      h *= std::max(0.1, 0.9 * std::pow(scale / (err + 1e-300), 0.2));
      continue;
    }
    double gn_old = grad_norm(f, x);
    double gn_mid = grad_norm(f, xmid);
    x = half;
    t += h;
    double gn_new = grad_norm(f, x);
    res.length += h / 6.0 * (gn_old + 4.0 * gn_mid + gn_new);
    res.times.push_back(t);
    res.traj.push_back(x);
    res.fvals.push_back(f.value(x));
    double r = 0.0;
    for (double v : x) r = std::max(r, std::abs(v));
    if (r > domain_radius) {
      res.left_domain = true;
      break;
    }
    if (err < 0.1 * scale) h = std::min(h * 1.5, 0.05);
  }
  return res;
}

TaylorRegionRecord taylor_region_check(const ModelFunction& f, double box, int grid,
                                       double eps_split) {
  TaylorRegionRecord rec;
  auto hess = f.hessian_at_zero();
  int d = f.dim;
  std::vector<bool> nondeg(d, false);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j)
      if (i != j && std::abs(hess[i * d + j]) > 1e-10) {
        rec.note = "Hessian not diagonal; rotate coordinates first";
        return rec;
      }
    nondeg[i] = std::abs(hess[i * d + i]) > 1e-10;
  }

  auto scan = [&](int g, double& cmin, std::vector<double>& worst) {
    cmin = 1e300;
    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    bool done = false;
    while (!done) {
      double r2 = 0.0;
      for (int i = 0; i < d; ++i) {
        x[i] = -box + 2.0 * box * idx[i] / (g - 1);
        r2 += x[i] * x[i];
      }
      if (r2 > 1e-12) {
        double c = grad_norm(f, x) / r2;
        if (c < cmin) {
          cmin = c;
          worst = x;
        }
      }
      int p = 0;
      while (p < d && ++idx[p] == g) idx[p++] = 0;
      done = (p == d);
    }
  };

  std::vector<double> worst1, worst2;
  double c1, c2;
  scan(grid, c1, worst1);
  scan(2 * grid - 1, c2, worst2);
  rec.c_fit = c1;
  rec.c_fit_refined = c2;
  rec.hypothesis_worst_x = worst2;
  rec.hypothesis_ok = c2 >= 0.6 * c1 && c2 > 0.0;
  if (!rec.hypothesis_ok) {
    rec.note = "first-inequality hypothesis |grad f| >= c|x|^2 fails near the recorded point";
    return rec;
  }

  std::vector<int> idx(d, 0);
  std::vector<double> x(d);
  bool done = false;
  int g = 2 * grid - 1;
  while (!done) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) {
      x[i] = -box + 2.0 * box * idx[i] / (g - 1);
      r2 += x[i] * x[i];
    }
    if (r2 > 1e-12) {
      double ynorm = 0.0, znorm2 = 0.0;
      for (int i = 0; i < d; ++i) {
        if (nondeg[i])
          ynorm += x[i] * x[i];
        else
          znorm2 += x[i] * x[i];
      }
      ynorm = std::sqrt(ynorm);
      double gn = grad_norm(f, x);
      if (gn > 1e-300) {
        double fv = std::abs(f.value(x));
        double ratio = std::pow(fv, 2.0 / 3.0) / gn;
        rec.C_half = std::max(rec.C_half, std::sqrt(fv) / gn);
        if (znorm2 <= eps_split * ynorm)
          rec.C_near = std::max(rec.C_near, ratio);
        else
          rec.C_far = std::max(rec.C_far, ratio);
      }
    }
    int p = 0;
    while (p < d && ++idx[p] == g) idx[p++] = 0;
    done = (p == d);
  }
  rec.pass = std::isfinite(rec.C_near) && std::isfinite(rec.C_far);
  return rec;
}

InterpolationRecord interpolation_check(const std::function<double(double)>& u, double r,
                                        int k, int samples, double exponent_shift) {
  if (k < 2 || k > 6) throw std::invalid_argument("interpolation_check: k in [2,6]");
  if (samples < 64 * k + 1)
    throw std::invalid_argument("interpolation_check: insufficient sampling for derivative estimation");
  const int n = 1;
  const double h = 4.0 * r / (samples - 1);
  std::vector<double> vals(samples);
  for (int i = 0; i < samples; ++i) vals[i] = u(-2.0 * r + i * h);

  // Repeated central differences; each order eats one node on each side.
  std::vector<std::vector<double>> deriv(k + 1);
  deriv[0] = vals;
  for (int o = 1; o <= k; ++o) {
    const auto& prev = deriv[o - 1];
    deriv[o].assign(samples, 0.0);
    for (int i = o; i < samples - o; ++i)
      deriv[o][i] = (prev[i + 1] - prev[i - 1]) / (2.0 * h);
  }

  auto sup_on = [&](const std::vector<double>& f, double half, int margin) {
    double m = 0.0;
    for (int i = margin; i < samples - margin; ++i) {
      double x = -2.0 * r + i * h;
      if (std::abs(x) <= half) m = std::max(m, std::abs(f[i]));
    }
    return m;
  };
  double sup_u = sup_on(deriv[0], r, 0);
  double sup_du = sup_on(deriv[1], r, 1);
  double sup_d2u = sup_on(deriv[2], r, 2);
  double sup_dku = sup_on(deriv[k], 2.0 * r, k);
  double l1 = 0.0;
  for (int i = 0; i < samples; ++i) l1 += std::abs(vals[i]) * h * (i == 0 || i == samples - 1 ? 0.5 : 1.0);

  double a = static_cast<double>(k) / (k + n) + exponent_shift;
  double b = static_cast<double>(k - 1) / (k + n) + exponent_shift;
  double c = static_cast<double>(k - 2) / (k + n) + exponent_shift;
  a = std::min(a, 0.999);
  b = std::min(b, 0.999);
  c = std::min(c, 0.999);

  InterpolationRecord rec;
  rec.r = r;
  rec.k = k;
  double rn = std::pow(r, -n);
  double rhs0 = rn * l1 + std::pow(l1, a) * std::pow(sup_dku, 1.0 - a);
  double rhs1 = rn * l1 + r * std::pow(l1, b) * std::pow(sup_dku, 1.0 - b);
  double rhs2 = rn * l1 + r * r * std::pow(l1, c) * std::pow(sup_dku, 1.0 - c);
  rec.c0 = rhs0 > 0 ? sup_u / rhs0 : 0.0;
  rec.c1 = rhs1 > 0 ? r * sup_du / rhs1 : 0.0;
  rec.c2 = rhs2 > 0 ? r * r * sup_d2u / rhs2 : 0.0;
  rec.ok = std::isfinite(rec.c0) && std::isfinite(rec.c1) && std::isfinite(rec.c2);
  return rec;
}

}  // namespace shrinkerlab
