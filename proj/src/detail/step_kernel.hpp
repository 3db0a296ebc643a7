#pragma once

// Table-driven stepping of product subsets. A letter (s;t) acts on a subset
// S as the union of two parts: every column mask of S pushed through s, and
// every row mask of S pushed through t. Both parts are table lookups.

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "ssc/automata.hpp"

namespace ssc::detail {

/// Subset-image tables for a list of transformations on a k-element set.
/// table(i)[mask] is the image of `mask` under transformation i.
class ImageTables {
 public:
  explicit ImageTables(std::size_t k) : k_(k), width_(std::size_t{1} << k) {}

  std::size_t add(std::span<const State> images) {
    const std::size_t base = data_.size();
    data_.resize(base + width_, 0);
    std::uint32_t* table = data_.data() + base;
    for (std::size_t mask = 1; mask < width_; ++mask) {
      const auto low = static_cast<std::size_t>(std::countr_zero(mask));
      table[mask] = table[mask & (mask - 1)] | (std::uint32_t{1} << (images[low] - 1));
    }
    return base / width_;
  }
  std::size_t add(const Transformation& t) { return add(t.images()); }

  const std::uint32_t* table(std::size_t i) const { return data_.data() + i * width_; }
  std::size_t size() const { return data_.size() / width_; }

 private:
  std::size_t k_;
  std::size_t width_;
  std::vector<std::uint32_t> data_;
};

/// Geometry of the m x n grid with row-major bit layout.
class GridKernel {
 public:
  GridKernel(std::size_t m, std::size_t n) : m_(m), n_(n), row_full_((std::uint64_t{1} << n) - 1) {
    const std::size_t width = std::size_t{1} << m;
    deposit_.assign(n * width, 0);
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t mask = 0; mask < width; ++mask) {
        std::uint64_t bits = 0;
        for (std::size_t p = 0; p < m; ++p) {
          if ((mask >> p) & 1U) bits |= std::uint64_t{1} << (p * n + q);
        }
        deposit_[q * width + mask] = bits;
      }
    }
    row_of_.resize(m * n);
    col_of_.resize(m * n);
    for (std::size_t i = 0; i < m * n; ++i) {
      row_of_[i] = static_cast<std::uint8_t>(i / n);
      col_of_[i] = static_cast<std::uint8_t>(i % n);
    }
  }

  std::size_t rows() const { return m_; }
  std::size_t columns() const { return n_; }

  /// rows[p] holds columns of row p (n bits), cols[q] rows of column q (m bits).
  void split(std::uint64_t bits, std::uint32_t* rows, std::uint32_t* cols) const {
    for (std::size_t p = 0; p < m_; ++p) rows[p] = static_cast<std::uint32_t>((bits >> (p * n_)) & row_full_);
    for (std::size_t q = 0; q < n_; ++q) cols[q] = 0;
    for (std::uint64_t b = bits; b; b &= b - 1) {
      const auto i = static_cast<std::size_t>(std::countr_zero(b));
      cols[col_of_[i]] |= std::uint32_t{1} << row_of_[i];
    }
  }

  std::uint64_t deposit(std::size_t q, std::uint32_t column_rows) const {
    return deposit_[(q << m_) + column_rows];
  }

  /// Cells (s(p), q): column masks pushed through s.
  std::uint64_t column_part(const std::uint32_t* cols, const std::uint32_t* s_table) const {
    std::uint64_t out = 0;
    for (std::size_t q = 0; q < n_; ++q) out |= deposit_[(q << m_) + s_table[cols[q]]];
    return out;
  }

  /// Cells (p, t(q)): row masks pushed through t.
  std::uint64_t row_part(const std::uint32_t* rows, const std::uint32_t* t_table) const {
    std::uint64_t out = 0;
    for (std::size_t p = 0; p < m_; ++p) out |= std::uint64_t{t_table[rows[p]]} << (p * n_);
    return out;
  }

  std::uint64_t step(std::uint64_t bits, const std::uint32_t* s_table, const std::uint32_t* t_table) const {
    std::uint32_t rows[64], cols[64];
    split(bits, rows, cols);
    return column_part(cols, s_table) | row_part(rows, t_table);
  }

  bool valid(std::uint64_t bits) const {
    if ((bits & row_full_) == 0) return false;
    for (std::size_t p = 0; p < m_; ++p) {
      if ((bits >> (p * n_)) & 1U) return true;
    }
    return false;
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::uint64_t row_full_;
  std::vector<std::uint64_t> deposit_;
  std::vector<std::uint8_t> row_of_;
  std::vector<std::uint8_t> col_of_;
};

}  // namespace ssc::detail
