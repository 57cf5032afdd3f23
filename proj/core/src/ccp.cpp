#include "rcc/ccp.hpp"

#include <cmath>
#include <string>

#include "rcc/error.hpp"

namespace rcc {

CcpMatrix::CcpMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

CcpMatrix::CcpMatrix(const std::vector<std::vector<double>>& rows) {
  rows_ = rows.size();
  cols_ = rows.empty() ? 0 : rows.front().size();
  values_.reserve(rows_ * cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols_) {
      throw Error(ErrorKind::dimension, "CCP row " + std::to_string(i) + " has " +
                                            std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(cols_));
    }
    for (double v : rows[i]) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::domain, "CCP row " + std::to_string(i) + " has a non-finite entry");
      }
      values_.push_back(v);
    }
  }
}

std::vector<double> CcpMatrix::column_means() const {
  std::vector<double> means(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) means[j] += (*this)(i, j);
  }
  for (double& m : means) m /= static_cast<double>(rows_);
  return means;
}

CcpMatrix intensity_matrix(const std::vector<std::vector<ColorPatchSample>>& samples) {
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const auto& image : samples) {
    std::vector<double>& row = rows.emplace_back();
    row.reserve(image.size());
    for (const ColorPatchSample& s : image) row.push_back(s.intensity);
  }
  return CcpMatrix(rows);
}

}  // namespace rcc
