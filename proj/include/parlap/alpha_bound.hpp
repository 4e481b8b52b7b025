#pragma once

// Edge splitting that makes every multi-edge alpha-bounded (leverage at most
// alpha) while leaving the Laplacian unchanged.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "parlap/core/error.hpp"
#include "parlap/core/parallel.hpp"
#include "parlap/core/random.hpp"
#include "parlap/multigraph.hpp"
#include "parlap/richardson.hpp"

namespace parlap {

enum class BoundingMode { Naive, Estimate };

struct BoundingConfig {
  double alpha_inverse = 1.0;
  BoundingMode mode = BoundingMode::Naive;
  /// Subsample factor: the sparse graph G' keeps ceil(m / K) edges.
  double K = 4.0;
  /// Rows of the random sign sketch; 0 selects default_jl_rows(n).
  std::size_t jl_rows = 0;
  std::uint64_t seed = 0;
  double safety_factor = 1.5;
  /// Accuracy of the sketch solves in L_{G'}.
  double jl_solve_epsilon = 0.05;
  std::size_t subsample_retries = 10;
};

inline std::size_t default_jl_rows(std::size_t n) {
  const double ln = n > 1 ? std::log(static_cast<double>(n)) : 1.0;
  return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(8.0 * ln)));
}

/// ceil(x) that forgives round-off just above an integer, so 0.3 * 10 gives 3.
inline std::size_t tolerant_ceil(double x) {
  const double slack = 1e-9 * std::max(1.0, std::abs(x));
  return static_cast<std::size_t>(std::max(0.0, std::ceil(x - slack)));
}

namespace detail {

inline void check_alpha_inverse(double alpha_inverse) {
  if (!(alpha_inverse >= 1.0) || !std::isfinite(alpha_inverse))
    throw Error(ErrorCode::InvalidConfig, "alpha inverse must be a finite value >= 1");
}

/// Replaces edge e by copies[e] parallel edges of weight w(e) / copies[e];
/// copies of one edge are contiguous and follow the input order.
inline WeightedMultiGraph split_edges(const WeightedMultiGraph& g, std::span<const std::size_t> copies) {
  const std::size_t m = g.num_edges();
  std::vector<std::size_t> start(m + 1, 0);
  for (std::size_t e = 0; e < m; ++e) start[e + 1] = start[e] + copies[e];
  std::vector<Edge> out(start[m]);
  parallel_for(m, [&](std::size_t e) {
    const Edge& src = g.edge(static_cast<EdgeId>(e));
    const double w = src.w / static_cast<double>(copies[e]);
    for (std::size_t c = start[e]; c < start[e + 1]; ++c) out[c] = {src.u, src.v, w};
  });
  return WeightedMultiGraph::from_edge_list(g.num_vertices(), std::move(out));
}

}  // namespace detail

/// Every edge becomes ceil(alpha^{-1}) copies.
inline WeightedMultiGraph split_naive(const WeightedMultiGraph& g, double alpha_inverse) {
  detail::check_alpha_inverse(alpha_inverse);
  const std::vector<std::size_t> copies(g.num_edges(), std::max<std::size_t>(1, tolerant_ceil(alpha_inverse)));
  return detail::split_edges(g, copies);
}

/// Edge e becomes ceil(alpha^{-1} tau_hat(e)) copies (at least one).
inline WeightedMultiGraph split_by_estimates(const WeightedMultiGraph& g, std::span<const double> tau_hat,
                                             double alpha_inverse) {
  detail::check_alpha_inverse(alpha_inverse);
  if (tau_hat.size() != g.num_edges())
    throw Error(ErrorCode::DimensionMismatch, "one leverage estimate per edge is required");
  std::vector<std::size_t> copies(g.num_edges());
  for (std::size_t e = 0; e < copies.size(); ++e) {
    if (!(tau_hat[e] > 0.0) || !std::isfinite(tau_hat[e]))
      throw Error(ErrorCode::InvalidConfig, "leverage estimate of edge " + std::to_string(e) + " is not positive");
    copies[e] = std::max<std::size_t>(1, tolerant_ceil(alpha_inverse * tau_hat[e]));
  }
  return detail::split_edges(g, copies);
}

/// Builds an approximate L^+ operator for a connected multigraph.
using SolverFactory = std::function<LinearOperator(const WeightedMultiGraph&)>;

struct LeverageEstimate {
  std::vector<double> tau_hat;
  /// Subsampling attempts made, including the one that succeeded.
  std::size_t attempts = 0;
  /// True when every subsample was disconnected and a spanning tree of G was
  /// added to the last one.
  bool used_tree_fallback = false;
  std::size_t subsample_edges = 0;
  std::size_t jl_rows = 0;
};

namespace detail {

/// Edge ids of a BFS spanning forest.
inline std::vector<EdgeId> spanning_tree_edges(const WeightedMultiGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<char> seen(n, 0);
  std::vector<EdgeId> tree;
  std::vector<VertexId> queue;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    queue.assign(1, static_cast<VertexId>(s));
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId x = queue[head];
      for (EdgeId id : g.incident(x)) {
        const VertexId y = g.edge(id).other(x);
        if (seen[y]) continue;
        seen[y] = 1;
        tree.push_back(id);
        queue.push_back(y);
      }
    }
  }
  return tree;
}

}  // namespace detail

/// Upper estimates of the leverage scores of g. G' is a uniform sample of
/// ceil(m / K) edges at their original weights, so L_{G'} <= L_G and
/// w(e) R_{G'}(e) >= tau(e). Effective resistances in G' are read off a
/// random sign sketch of its weighted incidence matrix, each sketch row
/// solved through `make_solver(G')`; the result is scaled by the safety factor
/// and clamped to 1.
inline LeverageEstimate estimate_leverage_overestimates(const WeightedMultiGraph& g, const BoundingConfig& cfg,
                                                        const SolverFactory& make_solver) {
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  if (!(cfg.K >= 1.0)) throw Error(ErrorCode::InvalidConfig, "K must be at least 1");
  if (!(cfg.safety_factor > 0.0)) throw Error(ErrorCode::InvalidConfig, "safety factor must be positive");
  if (!g.is_connected()) throw Error(ErrorCode::Disconnected, "input graph is not connected");

  LeverageEstimate est;
  est.tau_hat.assign(m, 1.0);
  if (n <= 1 || m == 0) return est;

  const std::size_t sample_size = std::min(m, static_cast<std::size_t>(std::ceil(static_cast<double>(m) / cfg.K)));
  SplitMix64 rng(derive_seed(cfg.seed, 0x1e5ULL));
  std::vector<EdgeId> pool(m);
  std::vector<char> chosen(m, 0);
  WeightedMultiGraph sparse;
  const std::size_t attempts_allowed = cfg.subsample_retries + 1;
  for (std::size_t attempt = 1;; ++attempt) {
    est.attempts = attempt;
    for (std::size_t e = 0; e < m; ++e) pool[e] = static_cast<EdgeId>(e);
    std::fill(chosen.begin(), chosen.end(), 0);
    for (std::size_t i = 0; i < sample_size; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
      std::swap(pool[i], pool[j]);
      chosen[pool[i]] = 1;
    }
    auto collect = [&] {
      std::vector<Edge> edges;
      for (std::size_t e = 0; e < m; ++e)
        if (chosen[e]) edges.push_back(g.edge(static_cast<EdgeId>(e)));
      return WeightedMultiGraph::from_edge_list(n, std::move(edges));
    };
    sparse = collect();
    if (sparse.is_connected()) break;
    if (attempt == attempts_allowed) {
      for (EdgeId id : detail::spanning_tree_edges(g)) chosen[id] = 1;
      est.used_tree_fallback = true;
      sparse = collect();
      break;
    }
  }
  est.subsample_edges = sparse.num_edges();

  const std::size_t k = cfg.jl_rows == 0 ? default_jl_rows(n) : cfg.jl_rows;
  est.jl_rows = k;
  const LinearOperator solve = make_solver(sparse);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));

  // sketch[r * n + v] = (L_{G'}^+ B'^T W'^{1/2} q_r)(v)
  std::vector<double> sketch(k * n);
  parallel_for_dynamic(
      k,
      [&](std::size_t r) {
        SplitMix64 row_rng(derive_seed(cfg.seed, 0x5e7c4ULL, r));
        Vector rhs(n, 0.0);
        for (const Edge& e : sparse.edges()) {
          const double q = (row_rng() >> 63) ? scale : -scale;
          const double s = q * std::sqrt(e.w);
          rhs[e.u] += s;
          rhs[e.v] -= s;
        }
        solve(rhs, std::span<double>(sketch.data() + r * n, n));
      },
      1);

  parallel_for(m, [&](std::size_t id) {
    const Edge& e = g.edge(static_cast<EdgeId>(id));
    double r2 = 0.0;
    for (std::size_t r = 0; r < k; ++r) {
      const double d = sketch[r * n + e.u] - sketch[r * n + e.v];
      r2 += d * d;
    }
    est.tau_hat[id] = std::min(1.0, cfg.safety_factor * e.w * r2);
    if (!(est.tau_hat[id] > 0.0)) est.tau_hat[id] = 1.0;
  });
  return est;
}

/// Splits g according to cfg.mode; estimate mode needs a solver factory for the
/// sketch solves.
inline WeightedMultiGraph make_alpha_bounded(const WeightedMultiGraph& g, const BoundingConfig& cfg,
                                             const SolverFactory& make_solver = {},
                                             LeverageEstimate* estimate = nullptr) {
  if (cfg.mode == BoundingMode::Naive) return split_naive(g, cfg.alpha_inverse);
  if (!make_solver) throw Error(ErrorCode::InvalidConfig, "estimate mode needs a solver factory");
  LeverageEstimate est = estimate_leverage_overestimates(g, cfg, make_solver);
  WeightedMultiGraph h = split_by_estimates(g, est.tau_hat, cfg.alpha_inverse);
  if (estimate) *estimate = std::move(est);
  return h;
}

}  // namespace parlap
