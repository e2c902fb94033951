#pragma once

#if defined(_OPENMP)
#include <omp.h>
#else
// Serial fallbacks so the library builds without OpenMP.
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
inline void omp_set_num_threads(int) {}
#endif

#include <atomic>
#include <cstddef>
#include <exception>

namespace oscmult {

// Global worker cap (CLI --threads). 0 means "whatever the runtime offers".
void set_thread_cap(int n);
int thread_cap();

// When true, parallel_for degrades to the plain serial loop. The serial path
// is kept as a reference implementation: every parallel loop in the library
// writes disjoint output slots, so both paths must agree bit-for-bit.
void set_force_serial(bool on);
bool force_serial();

// Deterministic parallel map: body(i) for i in [0, n). body must only write
// state owned by index i; no reductions across iterations.
template <class Body>
void parallel_for(std::size_t n, const Body& body) {
  if (force_serial() || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
#if defined(_OPENMP)
  // An exception escaping an OpenMP worker calls std::terminate, so capture
  // the first one and rethrow it after the region ends.
  std::atomic<bool> failed{false};
  std::exception_ptr err = nullptr;
  const int cap = thread_cap();
#pragma omp parallel for schedule(dynamic, 1) num_threads(cap > 0 ? cap : omp_get_max_threads())
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(oscmult_parallel_for_err)
      {
        if (!err) err = std::current_exception();
      }
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (err) std::rethrow_exception(err);
#else
  for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace oscmult
