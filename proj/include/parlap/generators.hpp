#pragma once

// Small graph families for demos, tests and benchmarks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <unordered_set>
#include <vector>

#include "parlap/core/error.hpp"
#include "parlap/core/random.hpp"
#include "parlap/multigraph.hpp"

namespace parlap::generators {

inline WeightedMultiGraph path(std::size_t n, double w = 1.0) {
  std::vector<Edge> edges;
  for (std::size_t v = 0; v + 1 < n; ++v) edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>(v + 1), w});
  return WeightedMultiGraph::from_edge_list(n, std::move(edges));
}

inline WeightedMultiGraph cycle(std::size_t n, double w = 1.0) {
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < n; ++v)
    edges.push_back({static_cast<VertexId>(v), static_cast<VertexId>((v + 1) % n), w});
  return WeightedMultiGraph::from_edge_list(n, std::move(edges));
}

inline WeightedMultiGraph complete(std::size_t n, double w = 1.0) {
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
  return WeightedMultiGraph::from_edge_list(n, std::move(edges));
}

/// rows x cols 4-neighbour grid; vertex r * cols + c.
inline WeightedMultiGraph grid(std::size_t rows, std::size_t cols, double w = 1.0) {
  std::vector<Edge> edges;
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * cols + c); };
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1), w});
      if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c), w});
    }
  return WeightedMultiGraph::from_edge_list(rows * cols, std::move(edges));
}

namespace detail {

inline std::uint64_t pair_key(VertexId u, VertexId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

/// exp(U[0, ln spread]): log-uniform weights in [1, spread].
inline double draw_weight(SplitMix64& rng, double spread) {
  return spread <= 1.0 ? 1.0 : std::exp(rng.uniform() * std::log(spread));
}

}  // namespace detail

/// Union of degree/2 uniformly random Hamiltonian cycles with repeated pairs
/// dropped: connected, simple, every degree at most `degree` (even).
inline WeightedMultiGraph random_regular(std::size_t n, std::size_t degree, std::uint64_t seed,
                                         double weight_spread = 1.0) {
  if (n < 3 || degree < 2 || degree % 2 != 0)
    throw Error(ErrorCode::InvalidConfig, "random_regular needs n >= 3 and an even degree >= 2");
  SplitMix64 rng(derive_seed(seed, 0x4e6ULL));
  std::vector<VertexId> order(n);
  std::unordered_set<std::uint64_t> present;
  present.reserve(n * degree);
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < degree / 2; ++c) {
    std::iota(order.begin(), order.end(), VertexId{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      const VertexId u = order[i];
      const VertexId v = order[(i + 1) % n];
      if (!present.insert(detail::pair_key(u, v)).second) continue;
      edges.push_back({u, v, detail::draw_weight(rng, weight_spread)});
    }
  }
  return WeightedMultiGraph::from_edge_list(n, std::move(edges));
}

/// Erdos-Renyi G(n, p) plus a random Hamiltonian path, so the result is
/// always connected.
inline WeightedMultiGraph random_connected(std::size_t n, double p, std::uint64_t seed, double weight_spread = 1.0) {
  if (n < 2) throw Error(ErrorCode::InvalidConfig, "random_connected needs at least two vertices");
  SplitMix64 rng(derive_seed(seed, 0xe7ULL));
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::unordered_set<std::uint64_t> present;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    present.insert(detail::pair_key(order[i], order[i + 1]));
    edges.push_back({order[i], order[i + 1], detail::draw_weight(rng, weight_spread)});
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.uniform() >= p) continue;
      const auto a = static_cast<VertexId>(u);
      const auto b = static_cast<VertexId>(v);
      if (!present.insert(detail::pair_key(a, b)).second) continue;
      edges.push_back({a, b, detail::draw_weight(rng, weight_spread)});
    }
  return WeightedMultiGraph::from_edge_list(n, std::move(edges));
}

}  // namespace parlap::generators
