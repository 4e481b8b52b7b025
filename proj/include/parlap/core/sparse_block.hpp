#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "parlap/core/parallel.hpp"

namespace parlap {

struct BlockEntry {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

/// Compressed-row nonnegative block, rows x cols. Parallel multi-edges between
/// the same pair are merged (weights summed in a fixed order), which is the
/// only form needed when the block is applied as an operator.
class SparseBlock {
 public:
  SparseBlock() = default;

  SparseBlock(std::size_t rows, std::size_t cols, std::vector<BlockEntry> entries)
      : rows_(rows), cols_(cols), offsets_(rows + 1, 0) {
    // Stable bucket sort by row, then by column within each row; duplicates
    // are summed in input order.
    std::vector<std::size_t> start(rows + 1, 0);
    for (const BlockEntry& e : entries) ++start[e.row + 1];
    for (std::size_t r = 0; r < rows; ++r) start[r + 1] += start[r];
    std::vector<BlockEntry> sorted(entries.size());
    {
      std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
      for (const BlockEntry& e : entries) sorted[cursor[e.row]++] = e;
    }
    columns_.reserve(sorted.size());
    values_.reserve(sorted.size());
    for (std::size_t r = 0; r < rows; ++r) {
      const auto first = sorted.begin() + static_cast<std::ptrdiff_t>(start[r]);
      const auto last = sorted.begin() + static_cast<std::ptrdiff_t>(start[r + 1]);
      std::stable_sort(first, last, [](const BlockEntry& a, const BlockEntry& b) { return a.col < b.col; });
      for (auto it = first; it != last;) {
        double total = 0.0;
        auto jt = it;
        for (; jt != last && jt->col == it->col; ++jt) total += jt->value;
        columns_.push_back(it->col);
        values_.push_back(total);
        it = jt;
      }
      offsets_[r + 1] = values_.size();
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  /// out[r] = sum_c block[r][c] * x[c]
  void multiply(std::span<const double> x, std::span<double> out) const {
    parallel_for(rows_, [&](std::size_t r) {
      double s = 0.0;
      for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) s += values_[k] * x[columns_[k]];
      out[r] = s;
    });
  }

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const std::uint32_t> columns() const noexcept { return columns_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> columns_;
  std::vector<double> values_;
};

}  // namespace parlap
