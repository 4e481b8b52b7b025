#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "parlap/alpha_bound.hpp"
#include "parlap/dd_subset.hpp"
#include "parlap/terminal_walks.hpp"
#include "support.hpp"

namespace parlap {
namespace {

TEST(TerminalWalks, TerminalEdgesPassThrough) {
  const auto triangle = generators::complete(3);
  const std::vector<VertexId> all{0, 1, 2};
  const auto r = terminal_walks(triangle, all, 1, 0);
  EXPECT_EQ(std::vector<Edge>(r.graph.edges().begin(), r.graph.edges().end()),
            std::vector<Edge>(triangle.edges().begin(), triangle.edges().end()));
  EXPECT_EQ(r.stats.discarded, 0u);
  EXPECT_EQ(r.stats.total_length, 3u);
}

TEST(TerminalWalks, PathMiddleIsHarmonic) {
  // 0 -(2)- 1 -(3)- 2, eliminating 1: a sample survives only if its walk
  // from 1 crosses the other edge, and then it has weight 6/5.
  const auto g = WeightedMultiGraph::from_edge_list(3, {{0, 1, 2.0}, {1, 2, 3.0}});
  const std::vector<VertexId> c{0, 2};
  const auto r = terminal_walks(g, c, 4, 0);
  ASSERT_LE(r.graph.num_edges(), 2u);
  EXPECT_EQ(r.graph.num_edges() + r.stats.discarded, 2u);
  for (const Edge& e : r.graph.edges()) {
    EXPECT_EQ(std::minmax(e.u, e.v), std::minmax(VertexId{0}, VertexId{1}));
    EXPECT_NEAR(e.w, 6.0 / 5.0, 1e-15);
  }
  EXPECT_EQ(r.stats.max_length, 2u);
}

TEST(TerminalWalks, WalkWeights) {
  const auto g = WeightedMultiGraph::from_edge_list(3, {{0, 1, 2.0}, {1, 2, 3.0}});
  const std::vector<VertexId> one{0, 1};
  const std::vector<EdgeId> e0{0};
  EXPECT_DOUBLE_EQ(enumerate_walk_weight(g, one, e0), 2.0);
  const std::vector<VertexId> three{0, 1, 2};
  const std::vector<EdgeId> both{0, 1};
  EXPECT_DOUBLE_EQ(enumerate_walk_weight(g, three, both), 6.0 / 5.0);
  const auto unit = generators::path(3);
  EXPECT_DOUBLE_EQ(enumerate_walk_weight(unit, three, both), 0.5);
  const std::vector<VertexId> wrong{0, 2};
  EXPECT_THROW(enumerate_walk_weight(g, wrong, e0), Error);
}

TEST(TerminalWalks, HarmonicWeightAndDiscards) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = split_naive(testing::random_graph(60, 5, seed), 3.0);
    SplitMix64 rng(seed);
    const auto f = five_dd_subset(g, rng).subset;
    std::vector<VertexId> c;
    std::vector<char> in_f(g.num_vertices(), 0);
    for (VertexId v : f) in_f[v] = 1;
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      if (!in_f[v]) c.push_back(v);
    const auto r = terminal_walks(g, c, seed, 2);
    EXPECT_LE(r.graph.num_edges(), g.num_edges());
    EXPECT_EQ(r.stats.edges_in, g.num_edges());
    EXPECT_EQ(r.stats.edges_out + r.stats.discarded, g.num_edges());
    EXPECT_EQ(r.graph.num_vertices(), c.size());
    // A harmonic combination is below every weight it combines.
    double heaviest = 0.0;
    for (const Edge& e : g.edges()) heaviest = std::max(heaviest, e.w);
    for (const Edge& e : r.graph.edges()) {
      EXPECT_NE(e.u, e.v);
      EXPECT_GT(e.w, 0.0);
      EXPECT_LE(e.w, heaviest);
    }
    // Edges already between terminals come through untouched and in order.
    std::vector<Edge> direct;
    std::vector<VertexId> pos(g.num_vertices(), kNoVertex);
    for (std::size_t i = 0; i < c.size(); ++i) pos[c[i]] = static_cast<VertexId>(i);
    for (const Edge& e : g.edges())
      if (!in_f[e.u] && !in_f[e.v]) direct.push_back({pos[e.u], pos[e.v], e.w});
    std::size_t found = 0;
    for (const Edge& e : r.graph.edges())
      if (found < direct.size() && e == direct[found]) ++found;
    EXPECT_EQ(found, direct.size());
  }
}

TEST(TerminalWalks, ReproducibleAcrossRuns) {
  const auto g = split_naive(testing::random_graph(80, 6, 2), 4.0);
  SplitMix64 rng(3);
  const auto f = five_dd_subset(g, rng).subset;
  std::vector<VertexId> c;
  std::size_t j = 0;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (j < f.size() && f[j] == v) {
      ++j;
      continue;
    }
    c.push_back(v);
  }
  const auto a = terminal_walks(g, c, 99, 5);
  const auto b = terminal_walks(g, c, 99, 5);
  EXPECT_EQ(std::vector<Edge>(a.graph.edges().begin(), a.graph.edges().end()),
            std::vector<Edge>(b.graph.edges().begin(), b.graph.edges().end()));
  const auto other = terminal_walks(g, c, 99, 6);
  EXPECT_NE(std::vector<Edge>(a.graph.edges().begin(), a.graph.edges().end()),
            std::vector<Edge>(other.graph.edges().begin(), other.graph.edges().end()));
}

TEST(TerminalWalks, WalkCap) {
  // Keeping only the two ends of a long path forces long walks.
  const auto p = generators::path(50);
  const std::vector<VertexId> c{0, 49};
  try {
    terminal_walks(p, c, 1, 0, 5);
    FAIL() << "expected WalkCapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WalkCapExceeded);
  }
}

TEST(TerminalWalks, RejectsBadTerminals) {
  const auto p = generators::path(4);
  EXPECT_THROW(terminal_walks(p, std::vector<VertexId>{}, 1, 0), Error);
  EXPECT_THROW(terminal_walks(p, std::vector<VertexId>{0, 0}, 1, 0), Error);
  EXPECT_THROW(terminal_walks(p, std::vector<VertexId>{0, 9}, 1, 0), Error);
}

TEST(TerminalWalks, DefaultCap) { EXPECT_EQ(default_walk_cap(1024), 1100u); }

}  // namespace
}  // namespace parlap
