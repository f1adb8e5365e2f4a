#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qkd {

// Execution policy for the hot loops. Exec::serial is the reference
// implementation; Exec::par must produce identical results for any body that
// only writes state indexed by its own iteration (reductions are done by the
// caller over stored per-index values, never inside the loop).
enum class Exec { serial, par };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

template <class F>
void for_each_index(Exec exec, std::size_t count, F&& body) {
#ifdef _OPENMP
  if (exec == Exec::par) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(count); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace qkd
