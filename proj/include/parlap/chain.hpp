#pragma once

#include <chrono>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parlap/core/error.hpp"
#include "parlap/core/parallel.hpp"
#include "parlap/core/random.hpp"
#include "parlap/core/sparse_block.hpp"
#include "parlap/dd_subset.hpp"
#include "parlap/exact_oracle.hpp"
#include "parlap/jacobi.hpp"
#include "parlap/multigraph.hpp"
#include "parlap/terminal_walks.hpp"

namespace parlap {

inline constexpr std::size_t kChainBaseSize = 100;

struct ChainOptions {
  std::uint64_t seed = 0;
  /// Elimination stops once a level has at most this many vertices.
  std::size_t base_size = kChainBaseSize;
  /// 0 selects default_walk_cap(m).
  std::size_t walk_cap = 0;
  /// Keep every G^(k); needed only for dense verification of the chain.
  bool keep_graphs = false;
};

struct ChainLevelStats {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t eliminated = 0;
  std::size_t rounds_used = 0;
  WalkStats walks;
  double seconds = 0.0;
};

/// Result of eliminating one level: the graph on the kept vertices (vertex i
/// is kept[i]) plus sampling statistics.
using Elimination = TerminalWalksResult;

template <class E>
concept Eliminator = requires(E e, const WeightedMultiGraph& g, std::span<const VertexId> kept, std::size_t level) {
  { e(g, kept, level) } -> std::same_as<Elimination>;
};

/// Approximate inverse of the eliminated block L_FF. The accuracy target is
/// set once the chain depth is known.
template <class S>
concept BlockSolver = requires(S s, const S cs, std::span<const double> in, std::span<double> out, double eps) {
  { cs.size() } -> std::convertible_to<std::size_t>;
  cs.apply(in, out);
  s.set_epsilon(eps);
};

template <class F, class S>
concept BlockSolverFactory = requires(F f, const WeightedMultiGraph& g, std::span<const VertexId> eliminated) {
  { f(g, eliminated) } -> std::same_as<S>;
};

struct TerminalWalksEliminator {
  std::uint64_t seed = 0;
  std::size_t walk_cap = 0;

  Elimination operator()(const WeightedMultiGraph& g, std::span<const VertexId> kept, std::size_t level) const {
    return terminal_walks(g, kept, seed, level, walk_cap);
  }
};

struct JacobiFactory {
  JacobiOperator operator()(const WeightedMultiGraph& g, std::span<const VertexId> eliminated) const {
    return build_jacobi(g, eliminated, 0.5);
  }
};

/// One elimination step G^(k) -> G^(k+1). Ids are local to G^(k).
struct ChainLevel {
  std::vector<VertexId> eliminated;
  std::vector<VertexId> kept;
  /// Weights W with L_CF = -W: rows index kept, columns index eliminated.
  SparseBlock kept_by_eliminated;
  /// Transpose of the above.
  SparseBlock eliminated_by_kept;
  ChainLevelStats stats;
};

/// Sequence of eliminations (G^(0..d); F_1..F_d) with an inner solver per
/// level and a dense base solve. apply() realizes the operator W of the
/// forward/backward block substitution.
template <BlockSolver Inner = JacobiOperator>
class FactorizationChain {
 public:
  FactorizationChain() = default;

  std::size_t depth() const noexcept { return levels_.size(); }
  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return m_; }
  std::span<const ChainLevel> levels() const noexcept { return levels_; }
  const Inner& inner(std::size_t k) const { return inner_.at(k); }
  const WeightedMultiGraph& base_graph() const noexcept { return base_graph_; }
  const PseudoInverse& base_solver() const noexcept { return base_; }
  const ChainOptions& options() const noexcept { return options_; }
  double seconds() const noexcept { return seconds_; }

  /// G^(0..d); empty unless built with keep_graphs.
  std::span<const WeightedMultiGraph> graphs() const noexcept { return graphs_; }

  void apply(std::span<const double> b, std::span<double> out) const {
    if (b.size() != n_ || out.size() != n_)
      throw Error(ErrorCode::DimensionMismatch, "apply_chain: vector length " + std::to_string(b.size()) + " for " +
                                                    std::to_string(n_) + " vertices");
    const std::size_t d = levels_.size();
    Vector current(b.begin(), b.end());
    project_out_ones(current);

    std::vector<Vector> forward(d);
    for (std::size_t k = 0; k < d; ++k) {
      const ChainLevel& level = levels_[k];
      const std::size_t nf = level.eliminated.size();
      const std::size_t nc = level.kept.size();
      Vector b_f(nf);
      parallel_for(nf, [&](std::size_t i) { b_f[i] = current[level.eliminated[i]]; });
      forward[k].resize(nf);
      inner_[k].apply(b_f, forward[k]);
      // y_C = b_C - L_CF y_F = b_C + W y_F
      Vector next(nc);
      level.kept_by_eliminated.multiply(forward[k], next);
      parallel_for(nc, [&](std::size_t i) { next[i] += current[level.kept[i]]; });
      current = std::move(next);
    }

    Vector x = base_.solve(current);

    for (std::size_t k = d; k-- > 0;) {
      const ChainLevel& level = levels_[k];
      const std::size_t nf = level.eliminated.size();
      const std::size_t nc = level.kept.size();
      // x_F = y_F - Z L_FC x_C = y_F + Z (W^T x_C)
      Vector coupled(nf), correction(nf);
      level.eliminated_by_kept.multiply(x, coupled);
      inner_[k].apply(coupled, correction);
      Vector full(nf + nc);
      parallel_for(nc, [&](std::size_t i) { full[level.kept[i]] = x[i]; });
      parallel_for(nf, [&](std::size_t i) { full[level.eliminated[i]] = forward[k][i] + correction[i]; });
      x = std::move(full);
    }
    project_out_ones(x);
    std::copy(x.begin(), x.end(), out.begin());
  }

  Vector apply(std::span<const double> b) const {
    Vector out(b.size());
    apply(b, out);
    return out;
  }

 private:
  template <BlockSolver S, Eliminator E, BlockSolverFactory<S> F>
  friend FactorizationChain<S> build_chain(const WeightedMultiGraph&, const ChainOptions&, E, F);

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<ChainLevel> levels_;
  std::vector<Inner> inner_;
  std::vector<WeightedMultiGraph> graphs_;
  WeightedMultiGraph base_graph_;
  PseudoInverse base_;
  ChainOptions options_;
  double seconds_ = 0.0;
};

namespace detail {

inline std::vector<VertexId> complement(std::size_t n, std::span<const VertexId> sorted_subset) {
  std::vector<VertexId> rest;
  rest.reserve(n - sorted_subset.size());
  std::size_t j = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (j < sorted_subset.size() && sorted_subset[j] == v) {
      ++j;
      continue;
    }
    rest.push_back(static_cast<VertexId>(v));
  }
  return rest;
}

/// Off-diagonal coupling between the eliminated and the kept vertices, in
/// both orientations.
inline void coupling_blocks(const WeightedMultiGraph& g, ChainLevel& level) {
  std::vector<VertexId> kept_pos(g.num_vertices(), kNoVertex);
  for (std::size_t i = 0; i < level.kept.size(); ++i) kept_pos[level.kept[i]] = static_cast<VertexId>(i);
  std::vector<BlockEntry> by_kept, by_eliminated;
  for (std::size_t f = 0; f < level.eliminated.size(); ++f) {
    const VertexId v = level.eliminated[f];
    for (EdgeId id : g.incident(v)) {
      const Edge& e = g.edge(id);
      const VertexId c = kept_pos[e.other(v)];
      if (c == kNoVertex) continue;
      by_kept.push_back({c, static_cast<std::uint32_t>(f), e.w});
      by_eliminated.push_back({static_cast<std::uint32_t>(f), c, e.w});
    }
  }
  level.kept_by_eliminated = SparseBlock(level.kept.size(), level.eliminated.size(), std::move(by_kept));
  level.eliminated_by_kept = SparseBlock(level.eliminated.size(), level.kept.size(), std::move(by_eliminated));
}

}  // namespace detail

/// Eliminates 5-DD subsets level by level until at most options.base_size
/// vertices remain. Each level's Schur complement is produced by
/// `eliminate`; each eliminated block gets an inner solver from `make_inner`,
/// targeted at accuracy 1/(2d) once the depth d is known.
template <BlockSolver Inner, Eliminator E, BlockSolverFactory<Inner> F>
FactorizationChain<Inner> build_chain(const WeightedMultiGraph& g, const ChainOptions& options, E eliminate,
                                      F make_inner) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  if (!g.is_connected()) throw Error(ErrorCode::Disconnected, "input graph is not connected");

  FactorizationChain<Inner> chain;
  chain.n_ = g.num_vertices();
  chain.m_ = g.num_edges();
  chain.options_ = options;
  SplitMix64 rng(derive_seed(options.seed, 0x5dd5ULL));

  std::optional<WeightedMultiGraph> owned;
  const WeightedMultiGraph* current = &g;
  for (std::size_t k = 0; current->num_vertices() > options.base_size; ++k) {
    const auto level_started = clock::now();
    ChainLevel level;
    DDSubsetResult dd = five_dd_subset(*current, rng);
    level.eliminated = std::move(dd.subset);
    level.kept = detail::complement(current->num_vertices(), level.eliminated);
    detail::coupling_blocks(*current, level);
    chain.inner_.push_back(make_inner(*current, level.eliminated));

    Elimination next = eliminate(*current, level.kept, k);

    level.stats.vertices = current->num_vertices();
    level.stats.edges = current->num_edges();
    level.stats.eliminated = level.eliminated.size();
    level.stats.rounds_used = dd.rounds_used;
    level.stats.walks = next.stats;
    level.stats.seconds = std::chrono::duration<double>(clock::now() - level_started).count();
    chain.levels_.push_back(std::move(level));

    if (options.keep_graphs) chain.graphs_.push_back(*current);
    owned = std::move(next.graph);
    current = &*owned;
  }

  const std::size_t d = chain.levels_.size();
  for (auto& inner : chain.inner_) inner.set_epsilon(1.0 / (2.0 * static_cast<double>(d)));

  // Walks never leave a component, so a level that lost connectivity leaves
  // the base graph disconnected too.
  if (!current->is_connected()) throw Error(ErrorCode::Disconnected, "the chain lost connectivity");
  chain.base_graph_ = *current;
  if (options.keep_graphs) chain.graphs_.push_back(*current);
  chain.base_ = PseudoInverse(DenseLaplacian::from_graph(chain.base_graph_));
  chain.seconds_ = std::chrono::duration<double>(clock::now() - started).count();
  return chain;
}

/// Randomized chain: TerminalWalks elimination with Jacobi inner solves.
inline FactorizationChain<JacobiOperator> build_chain(const WeightedMultiGraph& g, const ChainOptions& options = {}) {
  return build_chain<JacobiOperator>(g, options, TerminalWalksEliminator{options.seed, options.walk_cap},
                                     JacobiFactory{});
}

template <BlockSolver Inner>
Vector apply_chain(const FactorizationChain<Inner>& chain, std::span<const double> b) {
  return chain.apply(b);
}

/// Bound on the depth implied by removing more than a 1/40 fraction per
/// level: ceil(log_{40/39}(n / base)).
inline std::size_t chain_depth_bound(std::size_t n, std::size_t base_size = kChainBaseSize) {
  if (n <= base_size) return 0;
  return static_cast<std::size_t>(
      std::ceil(std::log(static_cast<double>(n) / static_cast<double>(base_size)) / std::log(40.0 / 39.0)));
}

}  // namespace parlap
