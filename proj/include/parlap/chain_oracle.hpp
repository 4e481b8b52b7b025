#pragma once

// Exact counterparts of the randomized chain components, and explicit dense
// assembly of the factorization U^T D U a chain encodes.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "parlap/chain.hpp"
#include "parlap/core/error.hpp"
#include "parlap/exact_oracle.hpp"
#include "parlap/multigraph.hpp"

namespace parlap {

/// Eliminates with the exact dense Schur complement instead of sampling.
struct DenseSchurEliminator {
  Elimination operator()(const WeightedMultiGraph& g, std::span<const VertexId> kept, std::size_t) const {
    Elimination out;
    out.graph = dense_schur(DenseLaplacian::from_graph(g), kept).to_graph(0.0);
    out.stats.edges_in = g.num_edges();
    out.stats.edges_out = out.graph.num_edges();
    return out;
  }
};

/// Exact L_FF^{-1} via a dense Cholesky factorization.
class ExactBlockInverse {
 public:
  ExactBlockInverse() = default;

  ExactBlockInverse(const WeightedMultiGraph& g, std::span<const VertexId> subset) {
    const auto k = static_cast<Eigen::Index>(subset.size());
    std::vector<Eigen::Index> local(g.num_vertices(), -1);
    for (Eigen::Index i = 0; i < k; ++i) local[subset[static_cast<std::size_t>(i)]] = i;
    Eigen::MatrixXd block = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const VertexId v = subset[static_cast<std::size_t>(i)];
      block(i, i) = g.weighted_degree(v);
      for (EdgeId id : g.incident(v)) {
        const Edge& e = g.edge(id);
        const Eigen::Index j = local[e.other(v)];
        if (j >= 0) block(i, j) -= e.w;
      }
    }
    llt_.compute(block);
    if (llt_.info() != Eigen::Success) throw Error(ErrorCode::SingularBlock, "eliminated block is singular");
    size_ = subset.size();
  }

  std::size_t size() const noexcept { return size_; }
  void set_epsilon(double) noexcept {}

  void apply(std::span<const double> b, std::span<double> out) const {
    const auto k = static_cast<Eigen::Index>(size_);
    Eigen::Map<Eigen::VectorXd>(out.data(), k) = llt_.solve(Eigen::Map<const Eigen::VectorXd>(b.data(), k));
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::size_t size_ = 0;
};

struct ExactBlockFactory {
  ExactBlockInverse operator()(const WeightedMultiGraph& g, std::span<const VertexId> eliminated) const {
    return ExactBlockInverse(g, eliminated);
  }
};

/// Chain built with exact elimination and exact block solves; apply() is then
/// exactly L^+ up to round-off.
inline FactorizationChain<ExactBlockInverse> build_exact_chain(const WeightedMultiGraph& g,
                                                               ChainOptions options = {}) {
  return build_chain<ExactBlockInverse>(g, options, DenseSchurEliminator{}, ExactBlockFactory{});
}

struct ChainFactors {
  Eigen::MatrixXd block_diagonal;  // D^(d)
  Eigen::MatrixXd upper;           // U^(d)
};

/// Builds D^(d) and U^(d) in the vertex numbering of G^(0): D holds
/// (L_{G^(k)})_{F F} for each level and L_{G^(d)} for the remainder; U is the
/// identity plus the blocks L_FF^{-1} L_FC placed at rows F_{k+1}, columns
/// C_{k+1}. Needs a chain built with keep_graphs.
template <BlockSolver Inner>
ChainFactors chain_factors(const FactorizationChain<Inner>& chain) {
  const std::size_t n = chain.num_vertices();
  detail::check_oracle_size(n);
  if (chain.graphs().size() != chain.depth() + 1)
    throw Error(ErrorCode::InvalidConfig, "chain was built without keep_graphs");
  const auto nn = static_cast<Eigen::Index>(n);
  ChainFactors f{Eigen::MatrixXd::Zero(nn, nn), Eigen::MatrixXd::Identity(nn, nn)};

  std::vector<Eigen::Index> original(n);
  for (std::size_t v = 0; v < n; ++v) original[v] = static_cast<Eigen::Index>(v);
  for (std::size_t k = 0; k < chain.depth(); ++k) {
    const ChainLevel& level = chain.levels()[k];
    const Eigen::MatrixXd l = DenseLaplacian::from_graph(chain.graphs()[k]).matrix();
    std::vector<Eigen::Index> fl(level.eliminated.begin(), level.eliminated.end());
    std::vector<Eigen::Index> cl(level.kept.begin(), level.kept.end());
    std::vector<Eigen::Index> fg, cg;
    for (auto v : fl) fg.push_back(original[static_cast<std::size_t>(v)]);
    for (auto v : cl) cg.push_back(original[static_cast<std::size_t>(v)]);
    const Eigen::MatrixXd lff = l(fl, fl);
    f.block_diagonal(fg, fg) = lff;
    const Eigen::MatrixXd lfc = l(fl, cl);
    const Eigen::MatrixXd block = lff.llt().solve(lfc);
    f.upper(fg, cg) = block;
    std::vector<Eigen::Index> next;
    next.reserve(cg.size());
    for (auto v : cg) next.push_back(v);
    original = std::move(next);
  }
  const Eigen::MatrixXd base = DenseLaplacian::from_graph(chain.graphs().back()).matrix();
  f.block_diagonal(original, original) = base;
  return f;
}

/// (U^(d))^T D^(d) U^(d) on the input's vertices. The product has the
/// constant vector as its kernel but may carry small positive off-diagonals.
template <BlockSolver Inner>
DenseLaplacian assemble_chain_matrix(const FactorizationChain<Inner>& chain) {
  const ChainFactors f = chain_factors(chain);
  Eigen::MatrixXd product = f.upper.transpose() * f.block_diagonal * f.upper;
  product = 0.5 * (product + product.transpose());
  for (Eigen::Index i = 0; i < product.rows(); ++i) product(i, i) -= product.row(i).sum();
  return DenseLaplacian::from_matrix(std::move(product), false);
}

}  // namespace parlap
