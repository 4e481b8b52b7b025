#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "parlap/multigraph.hpp"
#include "support.hpp"

namespace parlap {
namespace {

TEST(Multigraph, SingleEdgeDegrees) {
  const auto g = WeightedMultiGraph::from_edge_list(2, {{0, 1, 1.0}});
  EXPECT_EQ(g.num_vertices(), 2u);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_DOUBLE_EQ(g.weighted_degree(0), 1.0);
  EXPECT_DOUBLE_EQ(g.weighted_degree(1), 1.0);
}

TEST(Multigraph, ParallelEdgesAccumulate) {
  const auto g = WeightedMultiGraph::from_edge_list(3, {{0, 1, 1.0}, {0, 1, 2.0}});
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_DOUBLE_EQ(g.weighted_degree(0), 3.0);
  EXPECT_DOUBLE_EQ(g.weighted_degree(2), 0.0);
}

TEST(Multigraph, RejectsBadInput) {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  EXPECT_EQ(code_of([] { WeightedMultiGraph::from_edge_list(3, {{0, 0, 1.0}}); }), ErrorCode::SelfLoop);
  EXPECT_EQ(code_of([] { WeightedMultiGraph::from_edge_list(2, {{0, 2, 1.0}}); }), ErrorCode::VertexOutOfRange);
  EXPECT_EQ(code_of([] { WeightedMultiGraph::from_edge_list(2, {{0, 1, 0.0}}); }), ErrorCode::NonPositiveWeight);
  EXPECT_EQ(code_of([] { WeightedMultiGraph::from_edge_list(2, {{0, 1, -1.0}}); }), ErrorCode::NonPositiveWeight);
  EXPECT_EQ(code_of([] { WeightedMultiGraph::from_edge_list(2, {{0, 1, INFINITY}}); }), ErrorCode::NonPositiveWeight);
}

TEST(Multigraph, ApplyLaplacianExamples) {
  const auto edge = WeightedMultiGraph::from_edge_list(2, {{0, 1, 1.0}});
  EXPECT_EQ(edge.apply_laplacian(std::vector<double>{1.0, 0.0}), (Vector{1.0, -1.0}));

  const auto triangle = generators::complete(3);
  const Vector y = triangle.apply_laplacian(std::vector<double>{1.0, 0.0, 0.0});
  const Eigen::VectorXd expect = testing::dense_laplacian(triangle) * Eigen::Vector3d(1.0, 0.0, 0.0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(y[i], expect(i), 1e-15);
  EXPECT_EQ(y, (Vector{2.0, -1.0, -1.0}));
}

TEST(Multigraph, ApplyLaplacianRejectsWrongLength) {
  const auto g = generators::path(4);
  EXPECT_THROW(g.apply_laplacian(std::vector<double>(3, 0.0)), Error);
}

TEST(Multigraph, Connectivity) {
  EXPECT_TRUE(WeightedMultiGraph::from_edge_list(2, {{0, 1, 1.0}}).is_connected());
  EXPECT_FALSE(WeightedMultiGraph::from_edge_list(2, {}).is_connected());
  EXPECT_TRUE(generators::path(5).is_connected());
  const auto two = WeightedMultiGraph::from_edge_list(4, {{0, 1, 1.0}, {2, 3, 1.0}});
  EXPECT_EQ(two.component_count(), 2u);
  const auto labels = two.component_labels();
  EXPECT_EQ(labels[0], labels[1]);
  EXPECT_NE(labels[1], labels[2]);
}

TEST(Multigraph, InducedSubgraphs) {
  const auto triangle = generators::complete(3);
  const std::vector<VertexId> pair{0, 1};
  const auto sub = triangle.induced_subgraph(pair);
  EXPECT_EQ(sub.graph.num_vertices(), 2u);
  EXPECT_EQ(sub.graph.num_edges(), 1u);

  const std::vector<VertexId> all{0, 1, 2};
  const auto same = triangle.induced_subgraph(all);
  EXPECT_EQ(std::vector<Edge>(same.graph.edges().begin(), same.graph.edges().end()),
            std::vector<Edge>(triangle.edges().begin(), triangle.edges().end()));

  const auto star = WeightedMultiGraph::from_edge_list(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
  const std::vector<VertexId> leaves{1, 2, 3};
  const auto empty = star.induced_subgraph(leaves);
  EXPECT_EQ(empty.graph.num_vertices(), 3u);
  EXPECT_EQ(empty.graph.num_edges(), 0u);
  EXPECT_EQ(empty.to_parent, leaves);
}

class MultigraphProperties : public ::testing::TestWithParam<int> {};

TEST_P(MultigraphProperties, KernelSymmetryDegreesAndRoundTrip) {
  const auto seed = static_cast<std::uint64_t>(GetParam());
  SplitMix64 rng(seed);
  const std::size_t n = 5 + rng.below(60);
  std::vector<Edge> input;
  const std::size_t m = n + rng.below(4 * n);
  for (std::size_t i = 0; i < m; ++i) {
    const auto u = static_cast<VertexId>(rng.below(n));
    auto v = static_cast<VertexId>(rng.below(n - 1));
    if (v >= u) ++v;
    input.push_back({u, v, std::exp(6.0 * rng.uniform() - 3.0)});
  }
  const auto g = WeightedMultiGraph::from_edge_list(n, input);

  const Vector zero = g.apply_laplacian(Vector(n, 1.0));
  for (double z : zero) EXPECT_LE(std::abs(z), 1e-10 * g.max_weighted_degree());

  const Vector x = testing::random_vector(n, seed + 1);
  const Vector y = testing::random_vector(n, seed + 2);
  const Vector lx = g.apply_laplacian(x);
  const Vector ly = g.apply_laplacian(y);
  double xly = 0.0, ylx = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xly += x[i] * ly[i];
    ylx += y[i] * lx[i];
    scale += std::abs(x[i] * ly[i]);
  }
  EXPECT_NEAR(xly, ylx, 1e-12 * scale);

  for (std::size_t v = 0; v < n; ++v) {
    double s = 0.0;
    for (const Edge& e : input)
      if (e.u == v || e.v == v) s += e.w;
    EXPECT_NEAR(g.weighted_degree(static_cast<VertexId>(v)), s, 1e-12 * std::max(1.0, s));
  }

  // Adjacency and edge list hold the same multiset, and the edge list is the
  // input in order.
  EXPECT_EQ(std::vector<Edge>(g.edges().begin(), g.edges().end()), input);
  std::vector<std::size_t> seen(m, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (EdgeId id : g.incident(static_cast<VertexId>(v))) {
      const Edge& e = g.edge(id);
      EXPECT_TRUE(e.u == v || e.v == v);
      ++seen[id];
    }
  for (std::size_t c : seen) EXPECT_EQ(c, 2u);
}

INSTANTIATE_TEST_SUITE_P(RandomMultigraphs, MultigraphProperties, ::testing::Range(1, 21));

}  // namespace
}  // namespace parlap
