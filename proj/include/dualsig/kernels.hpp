#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dualsig::kern {

// Reductions below are blocked: fixed-size blocks are accumulated serially
// and the per-block partials combined in block order. The result is
// therefore independent of the thread count, which keeps parallel runs
// bit-identical to serial blocked runs.
inline constexpr std::size_t block_size = 2048;

/// Plain left-to-right accumulation. Reference path for tests and the
/// benchmark baseline.
template <class F>
double sum_serial(std::size_t n, F&& term) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += term(i);
  return acc;
}

template <class F>
double sum_blocked(std::size_t n, F&& term, bool parallel = false) {
  (void)parallel;
  if (n <= block_size) return sum_serial(n, term);
  const std::size_t nblocks = (n + block_size - 1) / block_size;
  std::vector<double> partial(nblocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * block_size;
    const std::size_t hi = lo + block_size < n ? lo + block_size : n;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

/// out[i] = term(i), elementwise; safe to parallelize, each slot written once.
template <class F>
void fill(std::size_t n, double* out, F&& term, bool parallel = false) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    out[static_cast<std::size_t>(i)] = term(static_cast<std::size_t>(i));
  }
#ifndef _OPENMP
  (void)parallel;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace dualsig::kern
