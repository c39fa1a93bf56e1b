#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "closek/dataset.hpp"

namespace closek {

/// Per-feature z-scoring fitted on one view and applied to any other.
/// Zero-variance features map to 0.
class Standardizer {
 public:
  static Standardizer fit(const Matrix& train_features);

  Matrix apply(const Matrix& features) const;
  LabeledDataset apply(const LabeledDataset& data) const;

  std::span<const double> means() const noexcept { return means_; }
  std::span<const double> scales() const noexcept { return scales_; }

 private:
  std::vector<double> means_;
  std::vector<double> scales_;  // 0 marks a zero-variance feature
};

struct SplitSpec {
  double train_frac = 0.50;
  double valid_frac = 0.25;
  double test_frac = 0.25;
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> valid;
  std::vector<std::size_t> test;
};

/// Random partition of [0, n) with sizes floor(train_frac * n),
/// floor(valid_frac * n) and the remainder. Each index list is sorted.
Split sample_split(std::size_t n, const SplitSpec& spec);

struct ThresholdScan {
  std::size_t errors = 0;
  double threshold = 0.0;
  /// +1: predict positive when x > threshold; -1: when x < threshold.
  int orientation = 1;
};

/// Exhaustive scan over every cut position between distinct sorted values
/// (plus both ends) and both orientations. Returns the exact minimum number
/// of 1-D threshold-classifier errors.
ThresholdScan threshold_scan(std::span<const double> values, std::span<const int> labels);

/// Feature column j as a vector.
std::vector<double> column(const Matrix& features, std::size_t j);

}  // namespace closek
