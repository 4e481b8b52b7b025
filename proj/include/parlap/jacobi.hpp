#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "parlap/core/error.hpp"
#include "parlap/core/parallel.hpp"
#include "parlap/core/sparse_block.hpp"
#include "parlap/multigraph.hpp"

namespace parlap {

/// Smallest odd integer l with l >= log2(3 / eps).
inline std::size_t jacobi_iterations(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw Error(ErrorCode::InvalidConfig, "Jacobi epsilon must lie in (0, 1)");
  auto l = static_cast<std::size_t>(std::ceil(std::log2(3.0 / eps)));
  if (l % 2 == 0) ++l;
  return l;
}

/// Truncated Neumann series Z = sum_{i=0}^{l} X^{-1} (-Y X^{-1})^i for the
/// 5-DD block L_FF = X + Y, where Y is the Laplacian of G[F] and X is the
/// remaining diagonal (each vertex's weight to vertices outside F).
class JacobiOperator {
 public:
  JacobiOperator() = default;

  JacobiOperator(std::vector<double> x_diag, std::vector<double> y_diag, SparseBlock y_adjacency, double eps)
      : x_(std::move(x_diag)), y_diag_(std::move(y_diag)), y_adj_(std::move(y_adjacency)) {
    set_epsilon(eps);
  }

  std::size_t size() const noexcept { return x_.size(); }
  std::size_t iterations() const noexcept { return l_; }
  double epsilon() const noexcept { return eps_; }
  std::span<const double> x_diagonal() const noexcept { return x_; }
  std::span<const double> y_diagonal() const noexcept { return y_diag_; }
  const SparseBlock& y_adjacency() const noexcept { return y_adj_; }

  /// Re-targets the accuracy; X and Y are unchanged.
  void set_epsilon(double eps) {
    l_ = jacobi_iterations(eps);
    eps_ = eps;
  }

  /// x^(0) = X^{-1} b, then l steps of x <- X^{-1} (b - Y x).
  void apply(std::span<const double> b, std::span<double> out) const {
    const std::size_t n = x_.size();
    if (b.size() != n || out.size() != n)
      throw Error(ErrorCode::DimensionMismatch, "Jacobi operator of size " + std::to_string(n) +
                                                    " applied to vector of length " + std::to_string(b.size()));
    parallel_for(n, [&](std::size_t i) { out[i] = b[i] / x_[i]; });
    if (y_adj_.nonzeros() == 0) return;
    std::vector<double> adj(n);
    for (std::size_t it = 0; it < l_; ++it) {
      y_adj_.multiply(out, adj);
      // Y x = diag(Y) x - A_F x; adj already holds A_F x, so in place is safe.
      parallel_for(n, [&](std::size_t i) { out[i] = (b[i] - y_diag_[i] * out[i] + adj[i]) / x_[i]; });
    }
  }

  Vector apply(std::span<const double> b) const {
    Vector out(b.size());
    apply(b, out);
    return out;
  }

 private:
  std::vector<double> x_;
  std::vector<double> y_diag_;
  SparseBlock y_adj_;
  std::size_t l_ = 1;
  double eps_ = 0.5;
};

/// Splits L_FF of g into X + Y and builds the operator. Index i of the
/// operator is subset[i]. Throws NotFiveDD if a row violates the condition.
inline JacobiOperator build_jacobi(const WeightedMultiGraph& g, std::span<const VertexId> subset, double eps) {
  const std::size_t n = g.num_vertices();
  std::vector<VertexId> local(n, kNoVertex);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= n) throw Error(ErrorCode::VertexOutOfRange, "Jacobi subset vertex " + std::to_string(subset[i]));
    local[subset[i]] = static_cast<VertexId>(i);
  }
  const std::size_t k = subset.size();
  std::vector<double> y_diag(k, 0.0);
  std::vector<BlockEntry> entries;
  for (std::size_t i = 0; i < k; ++i) {
    const VertexId v = subset[i];
    for (EdgeId id : g.incident(v)) {
      const Edge& e = g.edge(id);
      const VertexId o = local[e.other(v)];
      if (o == kNoVertex) continue;
      y_diag[i] += e.w;
      entries.push_back({static_cast<std::uint32_t>(i), o, e.w});
    }
  }
  std::vector<double> x_diag(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double degree = g.weighted_degree(subset[i]);
    if (y_diag[i] > degree / 5.0 * (1.0 + 1e-12))
      throw Error(ErrorCode::NotFiveDD, "vertex " + std::to_string(subset[i]) + " sends " +
                                            std::to_string(y_diag[i]) + " of its degree " + std::to_string(degree) +
                                            " into the block");
    x_diag[i] = degree - y_diag[i];
  }
  return JacobiOperator(std::move(x_diag), std::move(y_diag), SparseBlock(k, k, std::move(entries)), eps);
}

}  // namespace parlap
