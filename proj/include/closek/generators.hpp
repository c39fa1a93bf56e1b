#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "closek/dataset.hpp"

namespace closek {

/// n points at (-1, -1), n at (+1, +1), one at (+magnitude, -1) and one at
/// (-magnitude, +1). One feature; no randomness.
LabeledDataset gen_example1(std::size_t n, double outlier_magnitude);

/// n negatives with x ~ U(-1, 1) followed by n positives with x ~ U(0, 1).
LabeledDataset gen_example2(std::size_t n, std::uint64_t seed);

enum class Figure1Scenario { Easy, Imbalance, ImbalanceOutlier, Ambiguous };

std::string_view to_string(Figure1Scenario scenario);
Figure1Scenario parse_figure1_scenario(std::string_view name);

/// Two-feature datasets (u, v) for which the vertical line u = 0 attains the
/// optimal linear 0-1 error.
///
///  Easy              separable; 20% of points in a band |u| < 1, v in (-4, 4);
///                    80% far from the boundary at u in +-(2, 3), v in +-(7, 9).
///  Imbalance         separable; 9:1 negatives u ~ U(-3, 0) to positives
///                    u ~ U(0, 1), v ~ U(-1, 1).
///  ImbalanceOutlier  Imbalance plus n/50 positives deep in the negative
///                    region, u ~ U(-2.6, -2.4), v ~ U(-0.1, 0.1).
///  Ambiguous         negatives u ~ U(-1, 1), positives u ~ U(0, 1), v ~ U(-1, 1).
///
/// Rows are grouped by class (negatives first). Requires n >= 4.
LabeledDataset gen_figure1(Figure1Scenario scenario, std::size_t n, std::uint64_t seed);

}  // namespace closek
