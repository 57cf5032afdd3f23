#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rcc/color.hpp"

namespace rcc {

/// m x n matrix of one scalar channel of corresponding colour patches:
/// rows are images, columns are patches.
class CcpMatrix {
 public:
  CcpMatrix() = default;
  CcpMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Throws dimension error on ragged input, domain error on non-finite entries.
  explicit CcpMatrix(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return values_.empty(); }

  double operator()(std::size_t row, std::size_t col) const noexcept {
    return values_[row * cols_ + col];
  }
  double& operator()(std::size_t row, std::size_t col) noexcept {
    return values_[row * cols_ + col];
  }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }
  std::span<const double> values() const noexcept { return values_; }

  std::vector<double> column_means() const;

  friend bool operator==(const CcpMatrix&, const CcpMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Builds the intensity CCP matrix from per-image patch samples. Every
/// image must contribute the same number of patches.
CcpMatrix intensity_matrix(const std::vector<std::vector<ColorPatchSample>>& samples);

}  // namespace rcc
