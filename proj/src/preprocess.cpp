#include "closek/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "closek/errors.hpp"
#include "closek/random.hpp"

namespace closek {

Standardizer Standardizer::fit(const Matrix& train) {
  if (train.rows() == 0) throw ArgumentError("cannot standardize an empty view");
  const std::size_t d = train.cols();
  const double n = static_cast<double>(train.rows());
  Standardizer s;
  s.means_.assign(d, 0.0);
  s.scales_.assign(d, 0.0);
  for (std::size_t i = 0; i < train.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) s.means_[j] += train(i, j);
  }
  for (double& m : s.means_) m /= n;
  for (std::size_t i = 0; i < train.rows(); ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double c = train(i, j) - s.means_[j];
      s.scales_[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(s.scales_[j] / n);
    s.scales_[j] = sd > 1e-12 * std::max(1.0, std::abs(s.means_[j])) ? sd : 0.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& features) const {
  if (features.cols() != means_.size()) throw ArgumentError("standardizer width mismatch");
  Matrix out(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    for (std::size_t j = 0; j < features.cols(); ++j) {
      out(i, j) = scales_[j] == 0.0 ? 0.0 : (features(i, j) - means_[j]) / scales_[j];
    }
  }
  return out;
}

LabeledDataset Standardizer::apply(const LabeledDataset& data) const {
  LabeledDataset out = data;
  out.features = apply(data.features);
  return out;
}

Split sample_split(std::size_t n, const SplitSpec& spec) {
  if (n < 4) throw ArgumentError("splitting needs at least 4 examples");
  const double total = spec.train_frac + spec.valid_frac + spec.test_frac;
  if (std::abs(total - 1.0) > 1e-9 || spec.train_frac <= 0 || spec.valid_frac <= 0 ||
      spec.test_frac <= 0) {
    throw ArgumentError("split fractions must be positive and sum to 1");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(spec.seed);
  shuffle(std::span<std::size_t>(order), rng);

  const auto n_train = static_cast<std::size_t>(std::floor(spec.train_frac * static_cast<double>(n) + 1e-9));
  const auto n_valid = static_cast<std::size_t>(std::floor(spec.valid_frac * static_cast<double>(n) + 1e-9));
  Split split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.valid.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                     order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.valid.begin(), split.valid.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

ThresholdScan threshold_scan(std::span<const double> values, std::span<const int> labels) {
  if (values.size() != labels.size()) throw ArgumentError("values and labels differ in length");
  if (values.empty()) throw ArgumentError("threshold scan over no points");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  // Orientation +1 predicts positive right of the cut: errors are positives
  // left of it plus negatives right of it. Orientation -1 is the complement.
  std::size_t negatives_total = 0;
  for (int y : labels) negatives_total += y == -1 ? 1 : 0;

  ThresholdScan best;
  best.errors = n + 1;
  std::size_t pos_left = 0;
  std::size_t neg_left = 0;
  const auto consider = [&](double cut) {
    const std::size_t up = pos_left + (negatives_total - neg_left);
    if (up < best.errors) best = {up, cut, 1};
    const std::size_t down = n - up;
    if (down < best.errors) best = {down, cut, -1};
  };
  consider(values[order.front()] - 1.0);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t i = order[r];
    (labels[i] == 1 ? pos_left : neg_left) += 1;
    const bool last = r + 1 == n;
    if (last) {
      consider(values[i] + 1.0);
    } else if (values[order[r + 1]] > values[i]) {
      consider(0.5 * (values[i] + values[order[r + 1]]));
    }
  }
  return best;
}

std::vector<double> column(const Matrix& features, std::size_t j) {
  if (j >= features.cols()) throw ArgumentError("column index out of range");
  std::vector<double> out(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) out[i] = features(i, j);
  return out;
}

}  // namespace closek
