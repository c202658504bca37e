#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace coinpulse {

/// Upper bound on OpenMP threads used by the parallel kernels. 0 restores the
/// runtime default.
void set_worker_count(int workers);
int worker_count();

/// Runs body(i) for i in [0, n). Every index is written by exactly one thread,
/// so kernels that store into slot i stay deterministic for any thread count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
  for (long long i = 0; i < count; ++i) {
    body(static_cast<std::size_t>(i));
  }
}

}  // namespace coinpulse
