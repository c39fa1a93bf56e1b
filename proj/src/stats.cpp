#include "closek/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "closek/errors.hpp"

namespace closek {

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("paired test needs equal-length samples");
  if (a.size() < 2) throw ArgumentError("paired test needs at least two pairs");
  const std::size_t n = a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = b[i] - a[i];

  double mean = 0.0;
  for (double d : diff) mean += d;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  PairedTest out;
  out.mean_diff = mean;
  if (std::all_of(diff.begin(), diff.end(), [](double d) { return d == 0.0; })) {
    out.p_value = 1.0;
    return out;
  }
  if (sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
    out.p_value = 0.0;
    return out;
  }
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  out.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
  return out;
}

}  // namespace closek
