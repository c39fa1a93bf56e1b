#pragma once

#include <span>

namespace closek {

struct PairedTest {
  double p_value = 1.0;
  /// mean(b - a)
  double mean_diff = 0.0;
};

/// Two-sided paired t-test on b - a. All-zero differences give p = 1; a
/// constant nonzero difference gives p = 0.
PairedTest paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace closek
