#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "parlap/core/error.hpp"
#include "parlap/core/parallel.hpp"
#include "parlap/multigraph.hpp"

namespace parlap {

/// out <- Op(in); in and out have equal length and never alias.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

/// ceil(e^{2 delta} ln(1 / eps)).
inline std::size_t richardson_iteration_count(double delta, double eps) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidConfig, "delta must be positive");
  if (!(eps > 0.0) || !(eps < 1.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must lie in (0, 1)");
  return static_cast<std::size_t>(std::ceil(std::exp(2.0 * delta) * std::log(1.0 / eps)));
}

inline double richardson_step(double delta) { return 2.0 / (std::exp(-delta) + std::exp(delta)); }

struct RichardsonResult {
  Vector x;
  std::size_t iterations = 0;
};

/// Called after every iterate with (k, x^(k)); k = 0 is the starting point B b.
using RichardsonObserver = std::function<void(std::size_t, std::span<const double>)>;

/// x^(0) = B b, then x^(k) = x^(k-1) - alpha B (A x^(k-1)) + alpha x^(0) for a
/// fixed number of iterations. Every iterate is kept orthogonal to the
/// all-ones vector.
inline RichardsonResult precon_richardson(const LinearOperator& apply_a, const LinearOperator& apply_b,
                                          std::span<const double> b, double delta, double eps,
                                          const RichardsonObserver& observer = {}) {
  const std::size_t n = b.size();
  const std::size_t iterations = richardson_iteration_count(delta, eps);
  const double alpha = richardson_step(delta);

  RichardsonResult result;
  Vector x0(n), ax(n), bax(n);
  apply_b(b, x0);
  project_out_ones(x0);
  result.x = x0;
  if (observer) observer(0, result.x);
  for (std::size_t k = 1; k <= iterations; ++k) {
    apply_a(result.x, ax);
    apply_b(ax, bax);
    parallel_for(n, [&](std::size_t i) { result.x[i] += alpha * (x0[i] - bax[i]); });
    project_out_ones(result.x);
    if (observer) observer(k, result.x);
  }
  result.iterations = iterations;
  return result;
}

}  // namespace parlap
