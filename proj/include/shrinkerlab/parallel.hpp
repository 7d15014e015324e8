#pragma once

#include <cstddef>
#include <vector>

#ifdef SHRINKERLAB_OPENMP
#include <omp.h>
#endif

namespace shrinkerlab {

// Execution mode for the nodal kernels.  Pointwise maps may run in parallel
// (each output element is written exactly once, so serial and parallel give
// bitwise-identical results).  Reductions that feed emitted numbers are always
// accumulated serially in index order so that output files are deterministic
// regardless of thread count.
enum class Exec { Serial, Parallel };

Exec& default_exec();

template <class F>
inline void par_for(std::size_t n, F&& body, Exec mode) {
#ifdef SHRINKERLAB_OPENMP
  if (mode == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)mode;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

template <class F>
inline void par_for(std::size_t n, F&& body) {
  par_for(n, body, default_exec());
}

// Deterministic serial sum (fixed order independent of Exec).
inline double ordered_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace shrinkerlab
