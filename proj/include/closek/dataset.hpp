#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace closek {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  std::span<const double> values() const noexcept { return values_; }

  /// Appends a row; the first row fixes the column count of an empty matrix.
  void append_row(std::span<const double> row);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Feature matrix plus labels in {-1, +1}.
struct LabeledDataset {
  std::string name;
  Matrix features;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept { return features.cols(); }

  void append(std::span<const double> x, int label);

  /// Rows at the given indices, in the given order.
  LabeledDataset subset(std::span<const std::size_t> indices) const;

  std::size_t count_label(int label) const;

  /// Throws DatasetError unless n >= 1, every feature is finite, and every
  /// label is -1 or +1.
  void validate() const;

  bool operator==(const LabeledDataset&) const = default;
};

/// Rows of `a` followed by rows of `b`; dimensions must agree.
LabeledDataset concatenate(const LabeledDataset& a, const LabeledDataset& b);

}  // namespace closek
