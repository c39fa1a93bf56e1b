#include "closek/generators.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "closek/errors.hpp"
#include "closek/random.hpp"

namespace closek {

LabeledDataset gen_example1(std::size_t n, double outlier_magnitude) {
  if (n == 0) throw ArgumentError("example1 needs n >= 1");
  if (!(outlier_magnitude > static_cast<double>(n))) {
    throw ArgumentError("example1 outlier magnitude must exceed n");
  }
  LabeledDataset data;
  data.name = "example1";
  data.features = Matrix(0, 1);
  for (std::size_t i = 0; i < n; ++i) data.append(std::array{-1.0}, -1);
  for (std::size_t i = 0; i < n; ++i) data.append(std::array{1.0}, 1);
  data.append(std::array{outlier_magnitude}, -1);
  data.append(std::array{-outlier_magnitude}, 1);
  return data;
}

LabeledDataset gen_example2(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ArgumentError("example2 needs n >= 1");
  Rng rng(seed);
  LabeledDataset data;
  data.name = "example2";
  data.features = Matrix(0, 1);
  for (std::size_t i = 0; i < n; ++i) data.append(std::array{uniform(rng, -1.0, 1.0)}, -1);
  for (std::size_t i = 0; i < n; ++i) data.append(std::array{uniform(rng, 0.0, 1.0)}, 1);
  return data;
}

std::string_view to_string(Figure1Scenario scenario) {
  switch (scenario) {
    case Figure1Scenario::Easy: return "easy";
    case Figure1Scenario::Imbalance: return "imbalance";
    case Figure1Scenario::ImbalanceOutlier: return "imbalance_outlier";
    case Figure1Scenario::Ambiguous: return "ambiguous";
  }
  return "?";
}

Figure1Scenario parse_figure1_scenario(std::string_view name) {
  if (name == "easy") return Figure1Scenario::Easy;
  if (name == "imbalance") return Figure1Scenario::Imbalance;
  if (name == "imbalance_outlier" || name == "imbalance+outlier") {
    return Figure1Scenario::ImbalanceOutlier;
  }
  if (name == "ambiguous") return Figure1Scenario::Ambiguous;
  throw ArgumentError("unknown figure1 scenario '" + std::string(name) + "'");
}

namespace {

struct Box {
  double u_lo, u_hi, v_lo, v_hi;
};

void fill(LabeledDataset& data, Rng& rng, std::size_t count, const Box& box, int label) {
  for (std::size_t i = 0; i < count; ++i) {
    const double u = uniform(rng, box.u_lo, box.u_hi);
    const double v = uniform(rng, box.v_lo, box.v_hi);
    data.append(std::array{u, v}, label);
  }
}

// Minority share of the imbalanced panels: n/10 rounded, at least one.
std::size_t minority_count(std::size_t n) {
  return std::max<std::size_t>(1, (n + 5) / 10);
}

}  // namespace

LabeledDataset gen_figure1(Figure1Scenario scenario, std::size_t n, std::uint64_t seed) {
  if (n < 4) throw ArgumentError("figure1 scenarios need n >= 4");
  Rng rng(seed);
  LabeledDataset data;
  data.name = "figure1_" + std::string(to_string(scenario));
  data.features = Matrix(0, 2);

  switch (scenario) {
    case Figure1Scenario::Easy: {
      const std::size_t band = std::max<std::size_t>(2, n / 5);
      const std::size_t far = n - band;
      const std::size_t band_neg = band / 2;
      const std::size_t far_neg = far / 2;
      fill(data, rng, band_neg, {-1.0, 0.0, -4.0, 4.0}, -1);
      fill(data, rng, far_neg, {-3.0, -2.0, -9.0, -7.0}, -1);
      fill(data, rng, band - band_neg, {0.0, 1.0, -4.0, 4.0}, 1);
      fill(data, rng, far - far_neg, {2.0, 3.0, 7.0, 9.0}, 1);
      break;
    }
    case Figure1Scenario::Imbalance: {
      const std::size_t pos = minority_count(n);
      fill(data, rng, n - pos, {-3.0, 0.0, -1.0, 1.0}, -1);
      fill(data, rng, pos, {0.0, 1.0, -1.0, 1.0}, 1);
      break;
    }
    case Figure1Scenario::ImbalanceOutlier: {
      const std::size_t outliers = std::max<std::size_t>(1, n / 50);
      const std::size_t base = n - outliers;
      const std::size_t pos = minority_count(base);
      fill(data, rng, base - pos, {-3.0, 0.0, -1.0, 1.0}, -1);
      fill(data, rng, pos, {0.0, 1.0, -1.0, 1.0}, 1);
      fill(data, rng, outliers, {-2.6, -2.4, -0.1, 0.1}, 1);
      break;
    }
    case Figure1Scenario::Ambiguous: {
      const std::size_t neg = n / 2;
      fill(data, rng, neg, {-1.0, 1.0, -1.0, 1.0}, -1);
      fill(data, rng, n - neg, {0.0, 1.0, -1.0, 1.0}, 1);
      break;
    }
  }
  return data;
}

}  // namespace closek
