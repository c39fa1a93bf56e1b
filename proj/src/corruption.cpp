#include "closek/corruption.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "closek/errors.hpp"
#include "closek/random.hpp"

namespace closek {

namespace {

std::vector<std::size_t> rows_with_label(const LabeledDataset& data, int label) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.labels[i] == label) rows.push_back(i);
  }
  return rows;
}

void check_fraction(double fraction, const char* what) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ArgumentError(std::string(what) + " fraction must lie in (0, 1)");
  }
}

}  // namespace

std::size_t fraction_count(double fraction, std::size_t n) {
  // The slack absorbs representation error, e.g. 0.1 * 1000.
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
}

LabeledDataset inject_outliers(const LabeledDataset& data, double fraction, std::uint64_t seed) {
  check_fraction(fraction, "outlier");
  const auto negatives = rows_with_label(data, -1);
  const auto positives = rows_with_label(data, 1);
  if (negatives.empty() || positives.empty()) {
    throw DatasetError(DatasetProblem::SingleClass, "outlier injection needs both classes");
  }
  Rng rng(seed);
  LabeledDataset out = data;
  const std::size_t count = fraction_count(fraction, data.size());
  std::vector<double> features(data.dim());
  for (std::size_t r = 0; r < count; ++r) {
    const int label = data.labels[uniform_index(rng, data.size())];
    const auto& same = label == 1 ? positives : negatives;
    const auto& other = label == 1 ? negatives : positives;
    const auto x1 = data.features.row(same[uniform_index(rng, same.size())]);
    const auto x2 = data.features.row(other[uniform_index(rng, other.size())]);
    for (std::size_t j = 0; j < features.size(); ++j) features[j] = 10.0 * x2[j] - 9.0 * x1[j];
    out.append(features, label);
  }
  return out;
}

LabeledDataset amplify_imbalance(const LabeledDataset& data, double target_majority_frac,
                                 std::uint64_t seed) {
  if (!(target_majority_frac > 0.5 && target_majority_frac < 1.0)) {
    throw ArgumentError("target majority fraction must lie in (0.5, 1)");
  }
  const auto negatives = rows_with_label(data, -1);
  if (negatives.empty()) {
    throw DatasetError(DatasetProblem::SingleClass, "imbalance amplification needs negatives");
  }
  const std::size_t positives = data.size() - negatives.size();
  const auto reached = [&](std::size_t neg) {
    return static_cast<double>(neg) >=
           target_majority_frac * static_cast<double>(neg + positives) - 1e-9;
  };
  std::size_t wanted = negatives.size();
  if (!reached(wanted)) {
    wanted = static_cast<std::size_t>(std::ceil(
        target_majority_frac * static_cast<double>(positives) / (1.0 - target_majority_frac) -
        1e-9));
    while (!reached(wanted)) ++wanted;
  }
  Rng rng(seed);
  LabeledDataset out = data;
  for (std::size_t r = negatives.size(); r < wanted; ++r) {
    out.append(data.features.row(negatives[uniform_index(rng, negatives.size())]), -1);
  }
  return out;
}

LabeledDataset add_ambiguous(const LabeledDataset& data, double fraction, std::uint64_t seed) {
  check_fraction(fraction, "ambiguous");
  const auto negatives = rows_with_label(data, -1);
  if (negatives.empty()) {
    throw DatasetError(DatasetProblem::SingleClass, "ambiguous copies need negatives");
  }
  Rng rng(seed);
  LabeledDataset out = data;
  const std::size_t count = fraction_count(fraction, data.size());
  for (std::size_t r = 0; r < count; ++r) {
    out.append(data.features.row(negatives[uniform_index(rng, negatives.size())]), 1);
  }
  return out;
}

std::string_view to_string(Corruption corruption) {
  switch (corruption) {
    case Corruption::Outliers: return "outliers";
    case Corruption::Imbalance: return "imbalance";
    case Corruption::Ambiguous: return "ambiguous";
  }
  return "?";
}

Corruption parse_corruption(std::string_view name) {
  if (name == "outliers") return Corruption::Outliers;
  if (name == "imbalance") return Corruption::Imbalance;
  if (name == "ambiguous") return Corruption::Ambiguous;
  throw ArgumentError("unknown corruption '" + std::string(name) + "'");
}

LabeledDataset apply_corruption(const LabeledDataset& data, Corruption corruption, double level,
                                std::uint64_t seed) {
  if (level == 0.0) return data;
  switch (corruption) {
    case Corruption::Outliers: return inject_outliers(data, level, seed);
    case Corruption::Imbalance: return amplify_imbalance(data, level, seed);
    case Corruption::Ambiguous: return add_ambiguous(data, level, seed);
  }
  return data;
}

}  // namespace closek
