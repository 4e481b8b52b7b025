#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace parlap {

struct ExecutionSettings {
  /// When set, floating-point reductions use a fixed blocking that does not
  /// depend on the number of threads, so results are bit-identical across
  /// thread counts. Otherwise OpenMP reductions combine partials in whatever
  /// order the runtime picks.
  bool deterministic = false;
};

inline ExecutionSettings& execution_settings() noexcept {
  static ExecutionSettings settings;
  return settings;
}

inline void set_deterministic(bool on) noexcept { execution_settings().deterministic = on; }

inline void set_thread_count(int threads) noexcept {
#if defined(_OPENMP)
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

inline int thread_count() noexcept {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace detail {
inline constexpr std::ptrdiff_t kReductionBlock = 4096;
}

/// Sum of term(i) for i in [0, n).
template <class Term>
double parallel_sum(std::size_t n, Term&& term) {
  const auto count = static_cast<std::ptrdiff_t>(n);
  if (execution_settings().deterministic) {
    const std::ptrdiff_t blocks = (count + detail::kReductionBlock - 1) / detail::kReductionBlock;
    std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks; ++b) {
      const std::ptrdiff_t lo = b * detail::kReductionBlock;
      const std::ptrdiff_t hi = std::min(count, lo + detail::kReductionBlock);
      double s = 0.0;
      for (std::ptrdiff_t i = lo; i < hi; ++i) s += term(static_cast<std::size_t>(i));
      partial[static_cast<std::size_t>(b)] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
  }
  double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (std::ptrdiff_t i = 0; i < count; ++i) total += term(static_cast<std::size_t>(i));
  return total;
}

template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

/// Same as parallel_for but with dynamic scheduling, for loops whose
/// iterations have very uneven cost (random walks, independent solves).
template <class Body>
void parallel_for_dynamic(std::size_t n, Body&& body, int chunk = 256) {
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, chunk)
  for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  return parallel_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double sum(std::span<const double> a) {
  return parallel_sum(a.size(), [&](std::size_t i) { return a[i]; });
}

/// Removes the component along the all-ones vector in place and returns the
/// mean that was subtracted.
inline double project_out_ones(std::span<double> x) {
  if (x.empty()) return 0.0;
  const double mean = sum(x) / static_cast<double>(x.size());
  parallel_for(x.size(), [&](std::size_t i) { x[i] -= mean; });
  return mean;
}

}  // namespace parlap
