#pragma once

// Shared helpers for the unit tests and the acceptance runner. Everything
// here is built from dense linear algebra and does not reuse the code paths
// it is used to check.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "parlap/chain.hpp"
#include "parlap/exact_oracle.hpp"
#include "parlap/generators.hpp"
#include "parlap/multigraph.hpp"

namespace parlap::testing {

using Operator = std::function<void(std::span<const double>, std::span<double>)>;

/// Connected random graph with average degree about `avg_degree` and
/// log-uniform weights in [1, spread].
inline WeightedMultiGraph random_graph(std::size_t n, double avg_degree, std::uint64_t seed, double spread = 10.0) {
  const double p = std::min(1.0, avg_degree / static_cast<double>(n - 1));
  return generators::random_connected(n, p, seed, spread);
}

inline Eigen::MatrixXd dense_laplacian(const WeightedMultiGraph& g) { return DenseLaplacian::from_graph(g).matrix(); }

/// Matrix of a linear operator, one basis vector at a time.
inline Eigen::MatrixXd dense_operator(const Operator& op, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(nn, nn);
  std::vector<double> e(n, 0.0), out(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    op(e, out);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = out[i];
  }
  return m;
}

inline Eigen::VectorXd as_eigen(std::span<const double> x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = 2.0 * rng.uniform() - 1.0;
  return x;
}

inline std::vector<double> orthogonal_to_ones(std::vector<double> x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  for (double& v : x) v -= mean;
  return x;
}

/// ||x - y||_L with L dense.
inline double l_norm(const Eigen::MatrixXd& l, const Eigen::VectorXd& x) {
  const double q = x.dot(l * x);
  return std::sqrt(std::max(0.0, q));
}

/// Z = sum_{i=0}^{l} X^{-1} (-Y X^{-1})^i, with L_FF = X + Y taken from the
/// dense Laplacian: Y is the Laplacian of G[F], X the remaining diagonal.
inline Eigen::MatrixXd jacobi_series(const Eigen::MatrixXd& l, std::span<const VertexId> subset, std::size_t terms) {
  std::vector<Eigen::Index> f(subset.begin(), subset.end());
  const Eigen::MatrixXd lff = l(f, f);
  const auto k = lff.rows();
  Eigen::MatrixXd y = lff;
  for (Eigen::Index i = 0; i < k; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < k; ++j)
      if (j != i) off += lff(i, j);
    y(i, i) = -off;
  }
  const Eigen::VectorXd x = (lff - y).diagonal();
  const Eigen::MatrixXd x_inv = x.cwiseInverse().asDiagonal();
  const Eigen::MatrixXd step = -y * x_inv;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(k, k);
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i <= terms; ++i) {
    z += x_inv * power;
    power = power * step;
  }
  return z;
}

/// The chain's factorization written as a telescoping sum: starting from L,
/// level k replaces the exact Schur complement of G^(k) onto C_k by
/// L_{G^(k+1)}. Equals U^T D U because the rows of U for C_k are identity
/// rows. Needs keep_graphs.
template <class Chain>
Eigen::MatrixXd telescoped_chain_matrix(const Chain& chain) {
  const auto graphs = chain.graphs();
  const auto n = static_cast<Eigen::Index>(chain.num_vertices());
  Eigen::MatrixXd total = dense_laplacian(graphs[0]);
  std::vector<Eigen::Index> original(static_cast<std::size_t>(n));
  for (Eigen::Index v = 0; v < n; ++v) original[static_cast<std::size_t>(v)] = v;
  for (std::size_t k = 0; k < chain.depth(); ++k) {
    const auto& level = chain.levels()[k];
    const Eigen::MatrixXd exact = schur_complement_matrix(dense_laplacian(graphs[k]), level.kept);
    const Eigen::MatrixXd next = dense_laplacian(graphs[k + 1]);
    std::vector<Eigen::Index> kept_global;
    for (VertexId c : level.kept) kept_global.push_back(original[c]);
    total(kept_global, kept_global) += next - exact;
    original = std::move(kept_global);
  }
  return total;
}

/// max |A - B| / max |B|.
inline double relative_max_difference(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

}  // namespace parlap::testing
