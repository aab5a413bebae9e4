#pragma once

#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace btq {

/// Runs fn(i) for i in [0, count) on up to `workers` OpenMP threads
/// (0: runtime default). The first exception thrown is rethrown after the
/// loop; fn must write only to slot i of its outputs.
template <class Fn>
void parallel_for(long count, int workers, Fn&& fn) {
  std::exception_ptr first;
  std::mutex mu;
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
  for (long i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (!first) first = std::current_exception();
    }
  }
  (void)workers;
  if (first) std::rethrow_exception(first);
}

} // namespace btq
