#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "parlap/core/error.hpp"
#include "parlap/core/parallel.hpp"
#include "parlap/core/random.hpp"
#include "parlap/multigraph.hpp"

namespace parlap {

struct DDSubsetResult {
  /// Sorted vertex ids.
  std::vector<VertexId> subset;
  std::size_t rounds_used = 0;
};

/// Row condition for a 5-DD subset: every i in F has at most a fifth of its
/// weighted degree going to other members of F.
inline bool is_five_dd_subset(const WeightedMultiGraph& g, std::span<const VertexId> subset,
                              double relative_slack = 1e-12) {
  std::vector<char> inside(g.num_vertices(), 0);
  for (VertexId v : subset) inside[v] = 1;
  for (VertexId v : subset)
    if (inside_degree(g, v, inside) > g.weighted_degree(v) / 5.0 * (1.0 + relative_slack)) return false;
  return true;
}

inline std::size_t dd_candidate_size(std::size_t n) { return std::max<std::size_t>(1, n / 20); }

inline bool dd_subset_large_enough(std::size_t size, std::size_t n) {
  return n > 40 ? 40 * size > n : size >= 1;
}

/// Repeatedly samples n/20 vertices uniformly and keeps those whose weight
/// into the sample is at most a fifth of their degree, until more than n/40
/// survive (at least one when n <= 40). Filtering against the whole sample
/// makes the survivors 5-DD among themselves as well.
inline DDSubsetResult five_dd_subset(const WeightedMultiGraph& g, SplitMix64& rng) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw Error(ErrorCode::InvalidConfig, "five_dd_subset needs at least two vertices");
  const std::size_t sample_size = dd_candidate_size(n);
  const std::size_t round_cap = 64 * static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)) + 1.0));

  std::vector<VertexId> pool(n);
  std::iota(pool.begin(), pool.end(), VertexId{0});
  std::vector<char> in_sample(n, 0);
  std::vector<char> keep(sample_size, 0);

  DDSubsetResult result;
  for (std::size_t round = 1; round <= round_cap; ++round) {
    // Partial Fisher-Yates: the first sample_size entries of pool.
    for (std::size_t i = 0; i < sample_size; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(pool[i], pool[j]);
      in_sample[pool[i]] = 1;
    }
    parallel_for(sample_size, [&](std::size_t i) {
      const VertexId v = pool[i];
      keep[i] = inside_degree(g, v, in_sample) <= g.weighted_degree(v) / 5.0 ? 1 : 0;
    });
    std::vector<VertexId> survivors;
    for (std::size_t i = 0; i < sample_size; ++i) {
      if (keep[i]) survivors.push_back(pool[i]);
      in_sample[pool[i]] = 0;
    }
    if (dd_subset_large_enough(survivors.size(), n)) {
      std::sort(survivors.begin(), survivors.end());
      result.subset = std::move(survivors);
      result.rounds_used = round;
      return result;
    }
  }
  throw Error(ErrorCode::Internal, "five_dd_subset exceeded " + std::to_string(round_cap) + " rounds");
}

}  // namespace parlap
