#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "parlap/core/error.hpp"
#include "parlap/core/parallel.hpp"

namespace parlap {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Vector = std::vector<double>;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct Edge {
  VertexId u;
  VertexId v;
  double w;

  VertexId other(VertexId x) const noexcept { return x == u ? v : u; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct InducedSubgraph;

/// Undirected multigraph with positive weights. Holds the edge list and an
/// offset-indexed adjacency (incident multi-edge ids per vertex). Immutable
/// after construction.
class WeightedMultiGraph {
 public:
  WeightedMultiGraph() = default;

  /// Validates and builds both views. Self-loops, out-of-range endpoints and
  /// non-positive or non-finite weights are rejected.
  static WeightedMultiGraph from_edge_list(std::size_t n, std::vector<Edge> edges) {
    if (n > static_cast<std::size_t>(kNoVertex))
      throw Error(ErrorCode::VertexOutOfRange, "vertex count exceeds 32-bit ids");
    if (edges.size() >= static_cast<std::size_t>(std::numeric_limits<EdgeId>::max()))
      throw Error(ErrorCode::InvalidConfig, "edge count exceeds 32-bit ids");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const Edge& e = edges[i];
      if (e.u >= n || e.v >= n)
        throw Error(ErrorCode::VertexOutOfRange, "edge " + std::to_string(i) + " has endpoint outside [0, " +
                                                     std::to_string(n) + ")");
      if (e.u == e.v)
        throw Error(ErrorCode::SelfLoop, "edge " + std::to_string(i) + " is a self-loop at " + std::to_string(e.u));
      if (!(e.w > 0.0) || !std::isfinite(e.w))
        throw Error(ErrorCode::NonPositiveWeight, "edge " + std::to_string(i) + " has weight " + std::to_string(e.w));
    }
    return WeightedMultiGraph(n, std::move(edges));
  }

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const noexcept { return edges_[e]; }

  /// Ids of the multi-edges incident to v, in increasing id order.
  std::span<const EdgeId> incident(VertexId v) const noexcept {
    return std::span<const EdgeId>(adjacency_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
  }
  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const EdgeId> adjacency() const noexcept { return adjacency_; }

  double weighted_degree(VertexId v) const noexcept { return degrees_[v]; }
  std::span<const double> weighted_degrees() const noexcept { return degrees_; }

  double max_weighted_degree() const noexcept {
    double m = 0.0;
    for (double d : degrees_) m = std::max(m, d);
    return m;
  }

  /// out = (D - A) x, gathered per vertex so the result is independent of
  /// the thread count.
  void apply_laplacian(std::span<const double> x, std::span<double> out) const {
    if (x.size() != n_ || out.size() != n_)
      throw Error(ErrorCode::DimensionMismatch, "apply_laplacian: vector length " + std::to_string(x.size()) +
                                                    " for " + std::to_string(n_) + " vertices");
    parallel_for(n_, [&](std::size_t v) {
      double s = degrees_[v] * x[v];
      for (std::size_t k = offsets_[v]; k < offsets_[v + 1]; ++k) {
        const Edge& e = edges_[adjacency_[k]];
        s -= e.w * x[e.other(static_cast<VertexId>(v))];
      }
      out[v] = s;
    });
  }

  Vector apply_laplacian(std::span<const double> x) const {
    Vector out(n_);
    apply_laplacian(x, out);
    return out;
  }

  /// Label of each vertex's connected component, labels 0..k-1 in order of
  /// first appearance.
  std::vector<VertexId> component_labels(std::size_t* count = nullptr) const {
    std::vector<VertexId> label(n_, kNoVertex);
    std::vector<VertexId> stack;
    VertexId next = 0;
    for (std::size_t s = 0; s < n_; ++s) {
      if (label[s] != kNoVertex) continue;
      label[s] = next;
      stack.push_back(static_cast<VertexId>(s));
      while (!stack.empty()) {
        const VertexId x = stack.back();
        stack.pop_back();
        for (EdgeId id : incident(x)) {
          const VertexId y = edges_[id].other(x);
          if (label[y] == kNoVertex) {
            label[y] = next;
            stack.push_back(y);
          }
        }
      }
      ++next;
    }
    if (count) *count = next;
    return label;
  }

  std::size_t component_count() const {
    std::size_t count = 0;
    component_labels(&count);
    return count;
  }

  bool is_connected() const { return n_ <= 1 || component_count() == 1; }

  InducedSubgraph induced_subgraph(std::span<const VertexId> subset) const;

 private:
  WeightedMultiGraph(std::size_t n, std::vector<Edge> edges)
      : n_(n), edges_(std::move(edges)), offsets_(n + 1, 0), degrees_(n, 0.0) {
    // Degrees accumulate in edge-id order, the same order incident() lists.
    for (const Edge& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
      degrees_[e.u] += e.w;
      degrees_[e.v] += e.w;
    }
    for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
    adjacency_.resize(offsets_[n_]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      adjacency_[cursor[edges_[i].u]++] = static_cast<EdgeId>(i);
      adjacency_[cursor[edges_[i].v]++] = static_cast<EdgeId>(i);
    }
  }

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<EdgeId> adjacency_;
  std::vector<double> degrees_;
};

/// G[S] with local ids 0..|S|-1; to_parent[i] is the id in the parent graph.
struct InducedSubgraph {
  WeightedMultiGraph graph;
  std::vector<VertexId> to_parent;
};

inline InducedSubgraph WeightedMultiGraph::induced_subgraph(std::span<const VertexId> subset) const {
  std::vector<VertexId> local(n_, kNoVertex);
  std::vector<VertexId> to_parent;
  to_parent.reserve(subset.size());
  for (VertexId v : subset) {
    if (v >= n_) throw Error(ErrorCode::VertexOutOfRange, "induced_subgraph: vertex " + std::to_string(v));
    if (local[v] != kNoVertex) continue;
    local[v] = static_cast<VertexId>(to_parent.size());
    to_parent.push_back(v);
  }
  std::vector<Edge> kept;
  for (const Edge& e : edges_)
    if (local[e.u] != kNoVertex && local[e.v] != kNoVertex) kept.push_back({local[e.u], local[e.v], e.w});
  return {WeightedMultiGraph(to_parent.size(), std::move(kept)), std::move(to_parent)};
}

/// Weight of the multi-edges at v whose other endpoint is flagged in `inside`.
inline double inside_degree(const WeightedMultiGraph& g, VertexId v, std::span<const char> inside) {
  double s = 0.0;
  for (EdgeId id : g.incident(v)) {
    const Edge& e = g.edge(id);
    if (inside[e.other(v)]) s += e.w;
  }
  return s;
}

}  // namespace parlap
