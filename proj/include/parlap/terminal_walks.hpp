#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parlap/core/error.hpp"
#include "parlap/core/parallel.hpp"
#include "parlap/core/random.hpp"
#include "parlap/multigraph.hpp"

namespace parlap {

struct WalkStats {
  std::size_t edges_in = 0;
  std::size_t edges_out = 0;
  std::size_t discarded = 0;
  /// Edges in W(e) summed over all input multi-edges (each W(e) counts e itself).
  std::size_t total_length = 0;
  std::size_t max_length = 0;

  double mean_length() const noexcept {
    return edges_in == 0 ? 0.0 : static_cast<double>(total_length) / static_cast<double>(edges_in);
  }
};

struct TerminalWalksResult {
  /// Multigraph on the kept vertices; vertex i is kept[i] of the input.
  WeightedMultiGraph graph;
  WalkStats stats;
};

inline std::size_t default_walk_cap(std::size_t m) {
  const double lg = m > 1 ? std::ceil(std::log2(static_cast<double>(m))) : 0.0;
  return 100 * (static_cast<std::size_t>(lg) + 1);
}

namespace detail {

/// One step out of a vertex: the far endpoint and the weight of the edge.
struct Step {
  VertexId to;
  double w;
};

/// Alias tables over the incident multi-edges of every vertex walks can
/// visit. Each slot carries both of its outcomes, so a step costs one
/// uniform draw and a single slot read.
class StepSampler {
 public:
  StepSampler(const WeightedMultiGraph& g, std::span<const VertexId> position) : start_(g.num_vertices() + 1, 0) {
    const std::size_t n = g.num_vertices();
    for (std::size_t v = 0; v < n; ++v)
      start_[v + 1] = start_[v] + (position[v] == kNoVertex ? g.incident(static_cast<VertexId>(v)).size() : 0);
    slots_.resize(start_[n]);
    parallel_for_dynamic(
        n,
        [&](std::size_t v) {
          if (position[v] == kNoVertex) build(g, static_cast<VertexId>(v));
        },
        64);
  }

  Step step(VertexId x, SplitMix64& rng) const {
    const std::size_t base = start_[x];
    const std::size_t k = start_[x + 1] - base;
    const double r = rng.uniform() * static_cast<double>(k);
    std::size_t i = static_cast<std::size_t>(r);
    if (i >= k) i = k - 1;
    const Slot& s = slots_[base + i];
    return r - static_cast<double>(i) < s.threshold ? Step{s.self_to, s.self_w} : Step{s.alias_to, s.alias_w};
  }

 private:
  struct alignas(32) Slot {
    double threshold;
    double self_w;
    double alias_w;
    VertexId self_to;
    VertexId alias_to;
  };

  /// Vose's construction; slot i keeps its own edge with probability
  /// threshold and otherwise yields its alias.
  void build(const WeightedMultiGraph& g, VertexId v) {
    const std::span<const EdgeId> incident = g.incident(v);
    Slot* slot = slots_.data() + start_[v];
    const std::size_t k = incident.size();
    double total = 0.0;
    for (EdgeId id : incident) total += g.edge(id).w;
    std::vector<double> scaled(k);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < k; ++i) {
      const Edge& e = g.edge(incident[i]);
      slot[i].self_to = e.other(v);
      slot[i].self_w = e.w;
      scaled[i] = e.w * static_cast<double>(k) / total;
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.back();
      small.pop_back();
      const std::uint32_t l = large.back();
      slot[s].threshold = scaled[s];
      slot[s].alias_to = slot[l].self_to;
      slot[s].alias_w = slot[l].self_w;
      scaled[l] -= 1.0 - scaled[s];
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    // Leftovers are 1 up to round-off.
    for (const auto* rest : {&large, &small})
      for (std::uint32_t i : *rest) {
        slot[i].threshold = 1.0;
        slot[i].alias_to = slot[i].self_to;
        slot[i].alias_w = slot[i].self_w;
      }
  }

  std::vector<std::size_t> start_;
  std::vector<Slot> slots_;
};

}  // namespace detail

/// For every multi-edge e = (u, v), walks from u and from v until each hits
/// the kept set, and emits one multi-edge between the two terminals whose
/// weight is the harmonic combination 1 / sum_{f in W(e)} 1/w(f). Walks that
/// return to the same terminal are dropped. The stream of edge e is derived
/// from (seed, level, e), so the output does not depend on scheduling; the
/// output edges appear in order of their source edge.
inline TerminalWalksResult terminal_walks(const WeightedMultiGraph& g, std::span<const VertexId> kept,
                                          std::uint64_t seed, std::uint64_t level, std::size_t walk_cap = 0) {
  const std::size_t n = g.num_vertices();
  const std::size_t m = g.num_edges();
  if (kept.empty()) throw Error(ErrorCode::InvalidConfig, "terminal_walks: empty terminal set");
  if (walk_cap == 0) walk_cap = default_walk_cap(m);

  std::vector<VertexId> position(n, kNoVertex);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i] >= n) throw Error(ErrorCode::VertexOutOfRange, "terminal " + std::to_string(kept[i]));
    if (position[kept[i]] != kNoVertex)
      throw Error(ErrorCode::InvalidConfig, "duplicate terminal " + std::to_string(kept[i]));
    position[kept[i]] = static_cast<VertexId>(i);
  }
  const detail::StepSampler sampler(g, position);

  // Discarded samples keep u = kNoVertex and are compacted away afterwards.
  std::vector<Edge> out(m, Edge{kNoVertex, kNoVertex, 0.0});
  std::vector<std::uint32_t> length(m, 1);
  std::atomic<bool> cap_hit{false};

  parallel_for_dynamic(m, [&](std::size_t id) {
    const Edge& e = g.edge(static_cast<EdgeId>(id));
    if (position[e.u] != kNoVertex && position[e.v] != kNoVertex) {
      out[id] = {position[e.u], position[e.v], e.w};
      return;
    }
    SplitMix64 rng(derive_seed(seed, level, id));
    double inverse_sum = 1.0 / e.w;
    std::size_t steps = 0;
    auto walk = [&](VertexId x) {
      while (position[x] == kNoVertex) {
        if (++steps > walk_cap) return kNoVertex;
        const detail::Step f = sampler.step(x, rng);
        inverse_sum += 1.0 / f.w;
        x = f.to;
      }
      return x;
    };
    const VertexId c1 = walk(e.u);
    const VertexId c2 = c1 == kNoVertex ? kNoVertex : walk(e.v);
    length[id] = static_cast<std::uint32_t>(steps + 1);
    if (c1 == kNoVertex || c2 == kNoVertex) {
      cap_hit.store(true, std::memory_order_relaxed);
      return;
    }
    if (c1 != c2) out[id] = {position[c1], position[c2], 1.0 / inverse_sum};
  });
  if (cap_hit.load())
    throw Error(ErrorCode::WalkCapExceeded, "a walk exceeded " + std::to_string(walk_cap) +
                                                " steps; the eliminated set is far from diagonally dominant");

  TerminalWalksResult result;
  result.stats.edges_in = m;
  std::size_t kept_edges = 0;
  for (std::size_t id = 0; id < m; ++id) {
    result.stats.total_length += length[id];
    result.stats.max_length = std::max<std::size_t>(result.stats.max_length, length[id]);
    if (out[id].u != kNoVertex) out[kept_edges++] = out[id];
  }
  out.resize(kept_edges);
  result.stats.discarded = m - kept_edges;
  result.stats.edges_out = kept_edges;
  result.graph = WeightedMultiGraph::from_edge_list(kept.size(), std::move(out));
  return result;
}

/// Schur-complement weight of one C-terminal walk (u_0, e_1, u_1, ..., e_l, u_l):
/// prod_i w(e_i) / prod_{i=1}^{l-1} w(u_i), with w(u) the weighted degree in g.
inline double enumerate_walk_weight(const WeightedMultiGraph& g, std::span<const VertexId> vertices,
                                    std::span<const EdgeId> edges) {
  if (edges.empty() || vertices.size() != edges.size() + 1)
    throw Error(ErrorCode::DimensionMismatch, "a walk with l edges needs l+1 vertices");
  double weight = 1.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = g.edge(edges[i]);
    const bool joins = (e.u == vertices[i] && e.v == vertices[i + 1]) || (e.v == vertices[i] && e.u == vertices[i + 1]);
    if (!joins) throw Error(ErrorCode::InvalidConfig, "walk edge " + std::to_string(i) + " does not join its vertices");
    weight *= e.w;
    if (i > 0) weight /= g.weighted_degree(vertices[i]);
  }
  return weight;
}

}  // namespace parlap
