#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parlap/alpha_bound.hpp"
#include "parlap/chain.hpp"
#include "parlap/core/error.hpp"
#include "parlap/core/random.hpp"
#include "parlap/dd_subset.hpp"
#include "parlap/multigraph.hpp"
#include "parlap/terminal_walks.hpp"

namespace parlap {

struct SchurConfig {
  double epsilon = 0.25;
  double alpha_c0 = 1.0;
  /// Overrides ceil(alpha_c0 eps^{-2} ln^2 n) when set.
  std::optional<double> alpha_inverse;
  /// Split the input naively before eliminating. Turn off when the caller
  /// already made every multi-edge alpha-bounded.
  bool split = true;
  std::uint64_t seed = 0;
  std::size_t walk_cap = 0;
  /// Fresh-seed reruns allowed after a walk-cap failure.
  std::size_t max_rebuilds = 3;
};

/// ceil(c0 eps^{-2} ln^2 n), at least 1.
inline double schur_alpha_inverse(std::size_t n, double eps, double c0 = 1.0) {
  if (!(eps > 0.0) || !(eps < 0.5)) throw Error(ErrorCode::InvalidConfig, "epsilon must lie in (0, 1/2)");
  if (!(c0 > 0.0)) throw Error(ErrorCode::InvalidConfig, "alpha constant must be positive");
  const double ln = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
  return std::max(1.0, std::ceil(c0 * ln * ln / (eps * eps)));
}

struct SchurResult {
  /// Vertex i is terminals[i] of the input.
  WeightedMultiGraph graph;
  std::size_t depth = 0;
  std::vector<ChainLevelStats> levels;
  double alpha_inverse = 0.0;
  /// Multi-edges after splitting, i.e. the m the output is bounded by.
  std::size_t input_multi_edges = 0;
  std::size_t rebuilds = 0;
  double seconds = 0.0;
};

namespace detail {

inline SchurResult approx_schur_once(const WeightedMultiGraph& h, std::span<const VertexId> terminals,
                                     std::uint64_t seed, std::size_t walk_cap) {
  const std::size_t n = h.num_vertices();
  SchurResult result;
  result.input_multi_edges = h.num_edges();

  // label[v]: input id of local vertex v; terminal flag per local vertex.
  std::vector<VertexId> label(n);
  for (std::size_t v = 0; v < n; ++v) label[v] = static_cast<VertexId>(v);
  std::vector<char> is_terminal(n, 0);
  for (VertexId c : terminals) is_terminal[c] = 1;

  SplitMix64 rng(derive_seed(seed, 0x5c4uLL));
  WeightedMultiGraph current = h;
  for (std::size_t k = 0;; ++k) {
    std::vector<VertexId> rest;
    for (std::size_t v = 0; v < current.num_vertices(); ++v)
      if (!is_terminal[v]) rest.push_back(static_cast<VertexId>(v));
    if (rest.empty()) break;

    const auto level_started = std::chrono::steady_clock::now();
    ChainLevelStats stats;
    stats.vertices = current.num_vertices();
    stats.edges = current.num_edges();
    std::vector<VertexId> eliminated;
    if (rest.size() == 1) {
      eliminated = rest;
      stats.rounds_used = 0;
    } else {
      const InducedSubgraph sub = current.induced_subgraph(rest);
      DDSubsetResult dd = five_dd_subset(sub.graph, rng);
      stats.rounds_used = dd.rounds_used;
      for (VertexId f : dd.subset) eliminated.push_back(sub.to_parent[f]);
      std::sort(eliminated.begin(), eliminated.end());
    }
    const std::vector<VertexId> kept = complement(current.num_vertices(), eliminated);
    TerminalWalksResult next = terminal_walks(current, kept, seed, k, walk_cap);

    std::vector<VertexId> next_label(kept.size());
    std::vector<char> next_terminal(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      next_label[i] = label[kept[i]];
      next_terminal[i] = is_terminal[kept[i]];
    }
    stats.eliminated = eliminated.size();
    stats.walks = next.stats;
    stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - level_started).count();
    result.levels.push_back(stats);
    current = std::move(next.graph);
    label = std::move(next_label);
    is_terminal = std::move(next_terminal);
  }
  result.depth = result.levels.size();

  std::vector<VertexId> position(n, kNoVertex);
  for (std::size_t i = 0; i < terminals.size(); ++i) position[terminals[i]] = static_cast<VertexId>(i);
  std::vector<Edge> edges(current.edges().begin(), current.edges().end());
  for (Edge& e : edges) {
    e.u = position[label[e.u]];
    e.v = position[label[e.v]];
  }
  result.graph = WeightedMultiGraph::from_edge_list(terminals.size(), std::move(edges));
  return result;
}

}  // namespace detail

/// Sparse approximation of Sc(L_G, C): eliminates 5-DD subsets of the
/// remaining non-terminals with terminal walks until only C is left.
inline SchurResult approx_schur(const WeightedMultiGraph& g, std::span<const VertexId> terminals,
                                const SchurConfig& cfg = {}) {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = g.num_vertices();
  if (terminals.empty()) throw Error(ErrorCode::InvalidConfig, "terminal set is empty");
  if (terminals.size() >= n) throw Error(ErrorCode::InvalidConfig, "terminal set must leave a vertex to eliminate");
  std::vector<char> seen(n, 0);
  for (VertexId c : terminals) {
    if (c >= n) throw Error(ErrorCode::VertexOutOfRange, "terminal " + std::to_string(c));
    if (seen[c]) throw Error(ErrorCode::InvalidConfig, "duplicate terminal " + std::to_string(c));
    seen[c] = 1;
  }

  const double alpha_inverse = cfg.alpha_inverse ? *cfg.alpha_inverse : schur_alpha_inverse(n, cfg.epsilon, cfg.alpha_c0);
  const WeightedMultiGraph h = cfg.split ? split_naive(g, alpha_inverse) : g;

  for (std::size_t a = 0;; ++a) {
    try {
      SchurResult r = detail::approx_schur_once(h, terminals, derive_seed(cfg.seed, 0x5c40ULL, a), cfg.walk_cap);
      r.alpha_inverse = alpha_inverse;
      r.rebuilds = a;
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      return r;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::WalkCapExceeded && e.code() != ErrorCode::Internal) throw;
      if (a >= cfg.max_rebuilds)
        throw Error(ErrorCode::RetriesExhausted,
                    "Schur approximation failed " + std::to_string(a + 1) + " times; last error: " + e.what());
    }
  }
}

/// ceil(log_{40/39} s) + 1 for s eliminated vertices.
inline std::size_t schur_depth_bound(std::size_t eliminated) {
  if (eliminated <= 1) return 1;
  return static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(eliminated)) / std::log(40.0 / 39.0))) + 1;
}

}  // namespace parlap
