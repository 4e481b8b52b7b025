#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "parlap/dd_subset.hpp"
#include "parlap/jacobi.hpp"
#include "support.hpp"

namespace parlap {
namespace {

struct Instance {
  WeightedMultiGraph g;
  std::vector<VertexId> f;
};

Instance random_instance(std::size_t n, std::uint64_t seed) {
  Instance inst{testing::random_graph(n, 6, seed), {}};
  SplitMix64 rng(seed);
  inst.f = five_dd_subset(inst.g, rng).subset;
  return inst;
}

TEST(Jacobi, IterationCounts) {
  EXPECT_EQ(jacobi_iterations(0.5), 3u);
  EXPECT_EQ(jacobi_iterations(1.0 / 20.0), 7u);
  for (double eps : {0.9, 0.3, 0.1, 0.01, 1e-4}) {
    const std::size_t l = jacobi_iterations(eps);
    EXPECT_EQ(l % 2, 1u);
    EXPECT_GE(static_cast<double>(l), std::log2(3.0 / eps));
    EXPECT_LT(static_cast<double>(l) - 2.0, std::log2(3.0 / eps));
  }
  EXPECT_THROW(jacobi_iterations(0.0), Error);
  EXPECT_THROW(jacobi_iterations(1.0), Error);
}

TEST(Jacobi, IndependentSetIsExactDiagonalInverse) {
  const auto g = generators::cycle(10);
  const std::vector<VertexId> f{0, 2, 4, 6, 8};
  const auto z = build_jacobi(g, f, 0.5);
  EXPECT_EQ(z.y_adjacency().nonzeros(), 0u);
  const Vector out = z.apply(std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0});
  for (std::size_t i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(out[i], (i + 1.0) / 2.0);
  const Vector zero = z.apply(Vector(5, 0.0));
  for (double v : zero) EXPECT_EQ(v, 0.0);
}

TEST(Jacobi, SplittingInvariants) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = random_instance(80, seed);
    const auto z = build_jacobi(inst.g, inst.f, 0.1);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_GE(z.x_diagonal()[i], 4.0 * z.y_diagonal()[i] * (1.0 - 1e-12));
  }
}

TEST(Jacobi, RejectsNonDominantBlock) {
  const auto triangle = generators::complete(3);
  const std::vector<VertexId> f{0, 1};
  EXPECT_THROW(build_jacobi(triangle, f, 0.5), Error);
}

TEST(Jacobi, IterationMatchesSeries) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = random_instance(400, seed);
    ASSERT_GE(inst.f.size(), 10u);
    const auto z = build_jacobi(inst.g, inst.f, 0.01);
    const Eigen::MatrixXd series = testing::jacobi_series(testing::dense_laplacian(inst.g), inst.f, z.iterations());
    const Eigen::MatrixXd iter =
        testing::dense_operator([&](std::span<const double> in, std::span<double> out) { z.apply(in, out); }, z.size());
    EXPECT_LE(testing::relative_max_difference(iter, series), 1e-12);
  }
}

TEST(Jacobi, Symmetric) {
  const auto inst = random_instance(300, 3);
  const auto z = build_jacobi(inst.g, inst.f, 0.05);
  for (std::uint64_t probe = 0; probe < 5; ++probe) {
    const Vector x = testing::random_vector(z.size(), 10 + probe);
    const Vector y = testing::random_vector(z.size(), 20 + probe);
    const Vector zx = z.apply(x), zy = z.apply(y);
    double a = 0.0, b = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      a += x[i] * zy[i];
      b += y[i] * zx[i];
      scale += std::abs(x[i] * zy[i]);
    }
    EXPECT_NEAR(a, b, 1e-10 * scale);
  }
}

TEST(Jacobi, RetargetingKeepsTheBlock) {
  const auto inst = random_instance(200, 5);
  auto z = build_jacobi(inst.g, inst.f, 0.5);
  EXPECT_EQ(z.iterations(), 3u);
  z.set_epsilon(0.05);
  EXPECT_EQ(z.iterations(), 7u);
  EXPECT_THROW(z.apply(Vector(z.size() + 1, 0.0)), Error);
}

}  // namespace
}  // namespace parlap
