/// Times the pointwise geometry kernel and the spectral transforms, serial
/// against OpenMP, and checks that both paths agree bitwise.

#include <chrono>
#include <cstdio>

#include "shrinkerlab/graph_ops.hpp"

using namespace shrinkerlab;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <class F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, seconds(t0, t1));
  }
  return best;
}

}  // namespace

int main() {
  auto disc = make_discretization(128, 96, 12.0);
  GraphField u = tapered_mode(disc, 0, 2);
  u *= 0.05;
  {
    GraphField m = tapered_mode(disc, 1, 1);
    m *= 0.02;
    u += m;
  }
  NodalPack pack = eval_pack(u);

  GraphGeometry g_serial, g_parallel;
  double ts = time_best_of(7, [&] { kernels::graph_geometry_serial(*disc, pack, g_serial); });
  double tp = time_best_of(7, [&] { kernels::graph_geometry_parallel(*disc, pack, g_parallel); });

  bool identical = true;
  for (std::size_t i = 0; i < g_serial.rhs.size(); ++i)
    if (g_serial.rhs[i] != g_parallel.rhs[i]) identical = false;

  double ts_tr = time_best_of(7, [&] {
    default_exec() = Exec::Serial;
    auto v = u.nodal(1, 1);
    (void)v;
  });
  double tp_tr = time_best_of(7, [&] {
    default_exec() = Exec::Parallel;
    auto v = u.nodal(1, 1);
    (void)v;
  });
  default_exec() = Exec::Parallel;

  std::printf("grid %d x %d (%zu nodes)\n", disc->n_theta, disc->Q, disc->n_nodes());
  std::printf("%-24s %12s %12s %8s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");
  std::printf("%-24s %12.3f %12.3f %8.2f\n", "graph_geometry", ts * 1e3, tp * 1e3, ts / tp);
  std::printf("%-24s %12.3f %12.3f %8.2f\n", "spectral_transform", ts_tr * 1e3, tp_tr * 1e3,
              ts_tr / tp_tr);
  std::printf("serial/openmp outputs bitwise identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
