#include "closek/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "closek/errors.hpp"

namespace closek {

void Matrix::append_row(std::span<const double> row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) {
    throw ArgumentError("row width " + std::to_string(row.size()) +
                        " does not match matrix width " + std::to_string(cols_));
  }
  values_.insert(values_.end(), row.begin(), row.end());
  ++rows_;
}

void LabeledDataset::append(std::span<const double> x, int label) {
  features.append_row(x);
  labels.push_back(label);
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  LabeledDataset out;
  out.name = name;
  out.features = Matrix(0, dim());
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    if (i >= size()) throw ArgumentError("subset index out of range");
    out.append(features.row(i), labels[i]);
  }
  return out;
}

std::size_t LabeledDataset::count_label(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

void LabeledDataset::validate() const {
  if (labels.empty()) throw DatasetError(DatasetProblem::Empty, "dataset '" + name + "' is empty");
  if (features.rows() != labels.size()) {
    throw DatasetError(DatasetProblem::RaggedRow, "feature rows and labels disagree in count");
  }
  for (double v : features.values()) {
    if (!std::isfinite(v)) {
      throw DatasetError(DatasetProblem::NonFiniteFeature,
                         "dataset '" + name + "' has a non-finite feature value");
    }
  }
  for (int y : labels) {
    if (y != -1 && y != 1) {
      throw DatasetError(DatasetProblem::BadLabel,
                         "dataset '" + name + "' has a label outside {-1,+1}");
    }
  }
}

LabeledDataset concatenate(const LabeledDataset& a, const LabeledDataset& b) {
  if (a.size() > 0 && b.size() > 0 && a.dim() != b.dim()) {
    throw ArgumentError("cannot concatenate datasets of different dimension");
  }
  LabeledDataset out = a;
  for (std::size_t i = 0; i < b.size(); ++i) out.append(b.features.row(i), b.labels[i]);
  return out;
}

}  // namespace closek
