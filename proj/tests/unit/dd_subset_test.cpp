#include <algorithm>
#include <vector>

#include <gtest/gtest.h>

#include "parlap/dd_subset.hpp"
#include "support.hpp"

namespace parlap {
namespace {

/// Recomputes the row condition straight from the edge list.
bool recheck(const WeightedMultiGraph& g, const std::vector<VertexId>& f) {
  std::vector<char> in(g.num_vertices(), 0);
  for (VertexId v : f) in[v] = 1;
  std::vector<double> inside(g.num_vertices(), 0.0), total(g.num_vertices(), 0.0);
  for (const Edge& e : g.edges()) {
    total[e.u] += e.w;
    total[e.v] += e.w;
    if (in[e.u] && in[e.v]) {
      inside[e.u] += e.w;
      inside[e.v] += e.w;
    }
  }
  for (VertexId v : f)
    if (inside[v] > total[v] / 5.0 * (1.0 + 1e-12)) return false;
  return true;
}

TEST(DDSubset, StarLeavesAreIndependent) {
  std::vector<Edge> edges;
  for (VertexId leaf = 1; leaf < 8; ++leaf) edges.push_back({0, leaf, 1.0});
  const auto star = WeightedMultiGraph::from_edge_list(8, edges);
  const std::vector<VertexId> leaves{1, 2, 3, 4, 5, 6, 7};
  EXPECT_TRUE(is_five_dd_subset(star, leaves));
  const std::vector<VertexId> with_center{0, 1};
  EXPECT_FALSE(is_five_dd_subset(star, with_center));
}

TEST(DDSubset, SingleEdge) {
  SplitMix64 rng(1);
  const auto r = five_dd_subset(generators::path(2), rng);
  ASSERT_EQ(r.subset.size(), 1u);
  EXPECT_TRUE(is_five_dd_subset(generators::path(2), r.subset));
}

TEST(DDSubset, RandomGraphContract) {
  const auto g = testing::random_graph(200, 8, 4);
  SplitMix64 rng(2);
  const auto r = five_dd_subset(g, rng);
  EXPECT_TRUE(recheck(g, r.subset));
  EXPECT_GE(r.subset.size(), 6u);
  EXPECT_TRUE(std::is_sorted(r.subset.begin(), r.subset.end()));
}

TEST(DDSubset, ContractOverManyGraphs) {
  SplitMix64 rng(77);
  double rounds = 0.0;
  const int trials = 300;
  for (int t = 0; t < trials; ++t) {
    const std::size_t n = 2 + rng.below(300);
    const auto g = n < 3 ? generators::path(n) : testing::random_graph(n, 2.0 + 10.0 * rng.uniform(), 1000 + t);
    const auto r = five_dd_subset(g, rng);
    EXPECT_TRUE(recheck(g, r.subset));
    EXPECT_TRUE(dd_subset_large_enough(r.subset.size(), n)) << "n " << n << " |F| " << r.subset.size();
    rounds += static_cast<double>(r.rounds_used);
  }
  EXPECT_LE(rounds / trials, 2.0);
}

TEST(DDSubset, SubsetOfInducedSubgraphIsSubsetOfGraph) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = testing::random_graph(120, 6, seed);
    std::vector<VertexId> u;
    for (VertexId v = 0; v < 120; ++v)
      if ((v * 7 + seed) % 3 != 0) u.push_back(v);
    const auto sub = g.induced_subgraph(u);
    SplitMix64 rng(seed);
    const auto r = five_dd_subset(sub.graph, rng);
    std::vector<VertexId> in_parent;
    for (VertexId f : r.subset) in_parent.push_back(sub.to_parent[f]);
    EXPECT_TRUE(recheck(sub.graph, r.subset));
    EXPECT_TRUE(recheck(g, in_parent));
  }
}

TEST(DDSubset, Candidates) {
  EXPECT_EQ(dd_candidate_size(10), 1u);
  EXPECT_EQ(dd_candidate_size(400), 20u);
  EXPECT_TRUE(dd_subset_large_enough(11, 400));
  EXPECT_FALSE(dd_subset_large_enough(10, 400));
  EXPECT_TRUE(dd_subset_large_enough(1, 40));
}

TEST(DDSubset, Reproducible) {
  const auto g = testing::random_graph(300, 6, 9);
  SplitMix64 a(5), b(5);
  EXPECT_EQ(five_dd_subset(g, a).subset, five_dd_subset(g, b).subset);
}

}  // namespace
}  // namespace parlap
