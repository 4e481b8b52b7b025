#pragma once

// Dense reference computations: exact Schur complements, pseudoinverse
// solves, leverage scores and relative spectral distances. Used by the tests
// and as the base-case solver at the bottom of a factorization chain.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "parlap/core/error.hpp"
#include "parlap/multigraph.hpp"

namespace parlap {

inline constexpr std::size_t kOracleMaxVertices = 2000;

namespace detail {

inline void check_oracle_size(std::size_t n) {
  if (n > kOracleMaxVertices)
    throw Error(ErrorCode::OracleTooLarge,
                std::to_string(n) + " vertices exceeds dense oracle limit of " + std::to_string(kOracleMaxVertices));
}

/// Components of the graph whose edges are the nonzero off-diagonals of A.
inline int dense_component_count(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(a(i, i)));
  const double tiny = 1e-14 * std::max(scale, 1e-300);
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  std::vector<Eigen::Index> stack;
  int count = 0;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const Eigen::Index x = stack.back();
      stack.pop_back();
      for (Eigen::Index y = 0; y < n; ++y)
        if (y != x && label[y] < 0 && std::abs(a(x, y)) > tiny) {
          label[y] = count;
          stack.push_back(y);
        }
    }
    ++count;
  }
  return count;
}

}  // namespace detail

/// Dense symmetric Laplacian together with the dimension of its kernel
/// (number of connected components of the underlying graph).
class DenseLaplacian {
 public:
  DenseLaplacian() = default;

  static DenseLaplacian from_graph(const WeightedMultiGraph& g) {
    detail::check_oracle_size(g.num_vertices());
    const auto n = static_cast<Eigen::Index>(g.num_vertices());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
      a(e.u, e.u) += e.w;
      a(e.v, e.v) += e.w;
      a(e.u, e.v) -= e.w;
      a(e.v, e.u) -= e.w;
    }
    return DenseLaplacian(std::move(a), static_cast<int>(g.component_count()));
  }

  /// Wraps a matrix after checking the Laplacian invariants: symmetric,
  /// nonpositive off-diagonals, zero row sums. The sign check can be skipped
  /// for symmetric PSD matrices with zero row sums that are not graph
  /// Laplacians (an approximate factorization U^T D U, for instance).
  static DenseLaplacian from_matrix(Eigen::MatrixXd a, bool check_signs = true) {
    detail::check_oracle_size(static_cast<std::size_t>(a.rows()));
    if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "Laplacian must be square");
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (std::abs(a.row(i).sum()) > 1e-10 * scale)
        throw Error(ErrorCode::InvalidConfig, "row " + std::to_string(i) + " does not sum to zero");
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
          throw Error(ErrorCode::InvalidConfig, "matrix is not symmetric");
        if (check_signs && i != j && a(i, j) > 1e-12 * scale)
          throw Error(ErrorCode::InvalidConfig, "positive off-diagonal entry");
      }
    }
    const int kernel = detail::dense_component_count(a);
    return DenseLaplacian(std::move(a), kernel);
  }

  const Eigen::MatrixXd& matrix() const noexcept { return a_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  int kernel_dim() const noexcept { return kernel_dim_; }

  /// One multi-edge per strictly negative off-diagonal entry; entries at
  /// round-off level relative to the diagonal are dropped.
  WeightedMultiGraph to_graph(double drop_tolerance = 1e-13) const {
    std::vector<Edge> edges;
    const Eigen::Index n = a_.rows();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double w = -a_(i, j);
        if (w > drop_tolerance * 0.5 * (a_(i, i) + a_(j, j)))
          edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), w});
      }
    return WeightedMultiGraph::from_edge_list(size(), std::move(edges));
  }

 private:
  DenseLaplacian(Eigen::MatrixXd a, int kernel_dim) : a_(std::move(a)), kernel_dim_(kernel_dim) {}

  Eigen::MatrixXd a_;
  int kernel_dim_ = 1;
};

namespace detail {

struct Partition {
  std::vector<Eigen::Index> kept;
  std::vector<Eigen::Index> eliminated;
};

inline Partition partition(std::size_t n, std::span<const VertexId> kept) {
  std::vector<char> in_kept(n, 0);
  Partition p;
  for (VertexId c : kept) {
    if (c >= n) throw Error(ErrorCode::VertexOutOfRange, "terminal " + std::to_string(c));
    if (in_kept[c]) throw Error(ErrorCode::InvalidConfig, "duplicate terminal " + std::to_string(c));
    in_kept[c] = 1;
    p.kept.push_back(c);
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!in_kept[v]) p.eliminated.push_back(static_cast<Eigen::Index>(v));
  return p;
}

}  // namespace detail

/// L_CC - L_CF L_FF^{-1} L_FC for an arbitrary symmetric matrix; rows and
/// columns of the result follow the order of `kept`.
inline Eigen::MatrixXd schur_complement_matrix(const Eigen::MatrixXd& a, std::span<const VertexId> kept) {
  const auto p = detail::partition(static_cast<std::size_t>(a.rows()), kept);
  const Eigen::MatrixXd cc = a(p.kept, p.kept);
  if (p.eliminated.empty()) return cc;
  const Eigen::MatrixXd ff = a(p.eliminated, p.eliminated);
  const Eigen::MatrixXd fc = a(p.eliminated, p.kept);
  Eigen::LLT<Eigen::MatrixXd> llt(ff);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularBlock, "eliminated block is not positive definite");
  Eigen::MatrixXd s = cc - fc.transpose() * llt.solve(fc);
  return 0.5 * (s + s.transpose());
}

/// Exact Schur complement onto `kept`. Keeping every vertex returns L
/// (reordered to the order of `kept`).
inline DenseLaplacian dense_schur(const DenseLaplacian& l, std::span<const VertexId> kept) {
  if (kept.empty()) throw Error(ErrorCode::InvalidConfig, "dense_schur: empty terminal set");
  Eigen::MatrixXd s = schur_complement_matrix(l.matrix(), kept);
  // Restore exact zero row sums lost to round-off.
  for (Eigen::Index i = 0; i < s.rows(); ++i) s(i, i) = s(i, i) - s.row(i).sum();
  return DenseLaplacian::from_matrix(std::move(s));
}

/// Moore-Penrose pseudoinverse from an eigendecomposition, with the kernel
/// eigenvectors deflated explicitly.
class PseudoInverse {
 public:
  PseudoInverse() = default;

  explicit PseudoInverse(const DenseLaplacian& l) : kernel_dim_(l.kernel_dim()) {
    const Eigen::Index n = l.matrix().rows();
    if (n == 0) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(l.matrix());
    const Eigen::VectorXd& vals = eig.eigenvalues();
    const Eigen::MatrixXd& vecs = eig.eigenvectors();
    const Eigen::Index k = std::min<Eigen::Index>(kernel_dim_, n);
    const Eigen::Index r = n - k;
    pinv_ = vecs.rightCols(r) * vals.tail(r).cwiseInverse().asDiagonal() * vecs.rightCols(r).transpose();
    pinv_ = 0.5 * (pinv_ + pinv_.transpose());
    if (kernel_dim_ == 1) {
      // Exact deflation of the constant vector.
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
      const Eigen::VectorXd row_mean = pinv_ * ones / static_cast<double>(n);
      const double total_mean = ones.dot(row_mean) / static_cast<double>(n);
      pinv_ = pinv_ - row_mean * ones.transpose() - ones * row_mean.transpose() +
              Eigen::MatrixXd::Constant(n, n, total_mean);
    }
  }

  const Eigen::MatrixXd& matrix() const noexcept { return pinv_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(pinv_.rows()); }

  /// x = L^+ b; b is first projected onto the complement of the constant
  /// vector when the kernel is one-dimensional.
  void solve(std::span<const double> b, std::span<double> x) const {
    const auto n = pinv_.rows();
    if (static_cast<Eigen::Index>(b.size()) != n || static_cast<Eigen::Index>(x.size()) != n)
      throw Error(ErrorCode::DimensionMismatch, "pinv solve: wrong vector length");
    Eigen::Map<const Eigen::VectorXd> bb(b.data(), n);
    Eigen::Map<Eigen::VectorXd> xx(x.data(), n);
    xx.noalias() = pinv_ * bb;
  }

  Vector solve(std::span<const double> b) const {
    Vector x(b.size());
    solve(b, x);
    return x;
  }

  double effective_resistance(VertexId u, VertexId v) const {
    return pinv_(u, u) + pinv_(v, v) - 2.0 * pinv_(u, v);
  }

  double leverage(const Edge& e) const { return e.w * effective_resistance(e.u, e.v); }

 private:
  Eigen::MatrixXd pinv_;
  int kernel_dim_ = 1;
};

struct PinvSolveResult {
  Vector x;
  /// Mean removed from b before solving (0 when b was already orthogonal to
  /// the constant vector).
  double projection = 0.0;
};

inline PinvSolveResult pinv_solve(const DenseLaplacian& l, std::span<const double> b) {
  if (b.size() != l.size()) throw Error(ErrorCode::DimensionMismatch, "pinv_solve: wrong vector length");
  Vector rhs(b.begin(), b.end());
  PinvSolveResult r;
  double mean = 0.0;
  for (double v : rhs) mean += v;
  mean = rhs.empty() ? 0.0 : mean / static_cast<double>(rhs.size());
  for (double& v : rhs) v -= mean;
  r.projection = mean;
  r.x = PseudoInverse(l).solve(rhs);
  return r;
}

/// w(e) * b_e^T L^+ b_e.
inline double leverage_score(const DenseLaplacian& l, const Edge& e) { return PseudoInverse(l).leverage(e); }

enum class SpectralRoute {
  /// Cholesky-reduced generalized symmetric eigenproblem.
  Cholesky,
  /// Eigenvalues of B^{-1/2} A B^{-1/2} built from an eigendecomposition of B.
  ExplicitSqrt,
};

/// Eigenvalues (ascending) of the pencil (A, B) for symmetric A and
/// symmetric positive definite B.
inline Eigen::VectorXd generalized_eigenvalues(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                               SpectralRoute route = SpectralRoute::Cholesky) {
  if (route == SpectralRoute::Cholesky) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(a, b, Eigen::EigenvaluesOnly);
    if (ges.info() != Eigen::Success) throw Error(ErrorCode::KernelMismatch, "B is not positive definite");
    return ges.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(b);
  if (eb.eigenvalues().minCoeff() <= 0.0) throw Error(ErrorCode::KernelMismatch, "B is not positive definite");
  const Eigen::MatrixXd half_inv =
      eb.eigenvectors() * eb.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eb.eigenvectors().transpose();
  Eigen::MatrixXd c = half_inv * a * half_inv;
  c = 0.5 * (c + c.transpose());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c, Eigen::EigenvaluesOnly).eigenvalues();
}

/// Orthonormal basis (n x (n-1)) of the complement of the constant vector,
/// taken from the Householder reflection sending 1/sqrt(n) to e_0.
inline Eigen::MatrixXd ones_complement_basis(Eigen::Index n) {
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  v(0) -= 1.0;
  const double vv = v.squaredNorm();
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  if (vv > 0.0) h -= (2.0 / vv) * v * v.transpose();
  return h.rightCols(n - 1);
}

/// Smallest eps with e^{-eps} B <= A <= e^{eps} B on the complement of the
/// shared kernel: max |ln lambda| over the pencil's eigenvalues. Both inputs
/// must be Laplacians of connected graphs on the same vertex set.
inline double relative_spectral_error(const DenseLaplacian& a, const DenseLaplacian& b,
                                      SpectralRoute route = SpectralRoute::Cholesky) {
  if (a.size() != b.size())
    throw Error(ErrorCode::KernelMismatch, "matrices have different sizes " + std::to_string(a.size()) + " and " +
                                               std::to_string(b.size()));
  if (a.kernel_dim() != 1 || b.kernel_dim() != 1)
    throw Error(ErrorCode::KernelMismatch, "both Laplacians must have the constant vector as their only kernel");
  const auto n = static_cast<Eigen::Index>(a.size());
  if (n <= 1) return 0.0;
  const Eigen::MatrixXd q = ones_complement_basis(n);
  Eigen::MatrixXd ap = q.transpose() * a.matrix() * q;
  Eigen::MatrixXd bp = q.transpose() * b.matrix() * q;
  ap = 0.5 * (ap + ap.transpose());
  bp = 0.5 * (bp + bp.transpose());
  const Eigen::VectorXd lambda = generalized_eigenvalues(ap, bp, route);
  if (lambda.minCoeff() <= 0.0) throw Error(ErrorCode::KernelMismatch, "A is singular on the complement of 1");
  return std::max(std::abs(std::log(lambda.minCoeff())), std::abs(std::log(lambda.maxCoeff())));
}

}  // namespace parlap
