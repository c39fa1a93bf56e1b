#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "closek/dataset.hpp"

namespace closek {

// Corruption transforms. Each returns a new dataset consisting of the input
// rows followed by the appended rows; the input is never modified.

/// Number of rows a fraction of n stands for: ceil(fraction * n).
std::size_t fraction_count(double fraction, std::size_t n);

/// Appends ceil(fraction * n) outliers. For each: draw a class c with
/// probability proportional to its frequency, a row x1 of class c and a row
/// x2 of the other class (uniformly, with replacement), and emit features
/// 10 * x2 - 9 * x1 labelled c.
LabeledDataset inject_outliers(const LabeledDataset& data, double fraction, std::uint64_t seed);

/// Duplicates uniformly drawn negative rows until negatives make up at least
/// `target_majority_frac` of the dataset. Unchanged if already there.
LabeledDataset amplify_imbalance(const LabeledDataset& data, double target_majority_frac,
                                 std::uint64_t seed);

/// Appends ceil(fraction * n) exact copies of uniformly drawn negative rows,
/// labelled +1.
LabeledDataset add_ambiguous(const LabeledDataset& data, double fraction, std::uint64_t seed);

enum class Corruption { Outliers, Imbalance, Ambiguous };

std::string_view to_string(Corruption corruption);
Corruption parse_corruption(std::string_view name);

/// Dispatches to the matching transform; level 0 returns the input as is.
LabeledDataset apply_corruption(const LabeledDataset& data, Corruption corruption, double level,
                                std::uint64_t seed);

}  // namespace closek
