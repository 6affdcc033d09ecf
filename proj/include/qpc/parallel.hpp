#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qpc::par {

enum class Mode { Serial, OpenMP };

// Process-wide execution mode. Defaults to OpenMP when compiled with it;
// the serial path is the reference the parallel one is tested against.
inline Mode& execution_mode() {
#ifdef _OPENMP
  static Mode mode = Mode::OpenMP;
#else
  static Mode mode = Mode::Serial;
#endif
  return mode;
}

inline bool openmp_compiled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

// Runs fn(i) for i in [0, n). fn must only write to per-index slots the
// caller owns (result[i], etc.) and must derive any randomness from i, so
// the two modes produce bit-identical results.
template <class F>
void for_each_index(int n, F&& fn, Mode mode) {
#ifdef _OPENMP
  if (mode == Mode::OpenMP) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
#else
  (void)mode;
#endif
  for (int i = 0; i < n; ++i) {
    fn(i);
  }
}

template <class F>
void for_each_index(int n, F&& fn) {
  for_each_index(n, std::forward<F>(fn), execution_mode());
}

// Evaluates score(i) for i in [0, n) and returns the index of the maximum,
// breaking ties toward the lowest index. The scores are materialized first
// so the reduction order is independent of thread scheduling.
template <class F>
std::pair<int, double> argmax_by_index(int n, F&& score, Mode mode) {
  std::vector<double> values(static_cast<std::size_t>(n));
  for_each_index(n, [&](int i) { values[static_cast<std::size_t>(i)] = score(i); }, mode);
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
  }
  return {best, values[static_cast<std::size_t>(best)]};
}

template <class F>
std::pair<int, double> argmax_by_index(int n, F&& score) {
  return argmax_by_index(n, std::forward<F>(score), execution_mode());
}

}  // namespace qpc::par
