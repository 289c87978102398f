#pragma once

// Data-parallel loops over independent work items (protocol rounds, sweep
// cells, resimulations). Each item draws from its own counter-based stream,
// so the OpenMP kernel and the serial reference produce identical output.

#include <cstdint>
#include <span>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qpv {

enum class Execution { kSerial, kParallel };

/// Serial reference: out[i] = fn(first + i).
template <class T, class Fn>
void fill_indexed_serial(std::uint64_t first, std::span<T> out, Fn&& fn) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(first + i);
}

/// OpenMP kernel: same contract as fill_indexed_serial.
template <class T, class Fn>
void fill_indexed_parallel(std::uint64_t first, std::span<T> out, Fn&& fn) {
  const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = fn(first + static_cast<std::uint64_t>(i));
  }
}

template <class T, class Fn>
void fill_indexed(Execution exec, std::uint64_t first, std::span<T> out, Fn&& fn) {
  if (exec == Execution::kParallel) {
    fill_indexed_parallel(first, out, fn);
  } else {
    fill_indexed_serial(first, out, fn);
  }
}

inline int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) noexcept {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace qpv
