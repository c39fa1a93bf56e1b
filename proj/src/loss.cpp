#include "closek/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "closek/errors.hpp"

namespace closek {

namespace {

void check_label(int label) {
  if (label != -1 && label != 1) {
    throw ArgumentError("label must be -1 or +1, got " + std::to_string(label));
  }
}

void check_score(double score) {
  if (!std::isfinite(score)) {
    throw DivergenceError("non-finite model score");
  }
}

void check_k(std::size_t k, std::size_t n) {
  if (n == 0) throw ArgumentError("aggregate loss over an empty batch");
  if (k < 1 || k > n) {
    throw ArgumentError("k=" + std::to_string(k) + " outside [1, " +
                        std::to_string(n) + "]");
  }
}

// Indices sorted by loss descending, ties by index; first k kept.
std::vector<std::size_t> largest_k(std::span<const double> losses, std::size_t k) {
  std::vector<std::size_t> order(losses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto before = [&](std::size_t a, std::size_t b) {
    if (losses[a] != losses[b]) return losses[a] > losses[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), before);
  order.resize(k);
  return order;
}

}  // namespace

std::string_view to_string(LossKind kind) {
  return kind == LossKind::Logistic ? "logistic" : "hinge";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "logistic") return LossKind::Logistic;
  if (name == "hinge") return LossKind::Hinge;
  throw ArgumentError("unknown loss kind '" + std::string(name) + "'");
}

IndividualLoss::IndividualLoss(LossKind kind)
    : kind_(kind), threshold_(kind == LossKind::Logistic ? std::log(2.0) : 1.0) {}

double IndividualLoss::value(int label, double score) const {
  check_label(label);
  check_score(score);
  const double margin = label * score;
  if (kind_ == LossKind::Hinge) return std::max(0.0, 1.0 - margin);
  // log(1 + exp(-m)) without overflow for large |m|.
  if (margin > 0) return std::log1p(std::exp(-margin));
  return -margin + std::log1p(std::exp(margin));
}

double IndividualLoss::derivative(int label, double score) const {
  check_label(label);
  check_score(score);
  const double margin = label * score;
  if (kind_ == LossKind::Hinge) return margin < 1.0 ? -label : 0.0;
  // -y * sigmoid(-m), evaluated on the stable side.
  const double sig_neg = margin > 0 ? std::exp(-margin) / (1.0 + std::exp(-margin))
                                    : 1.0 / (1.0 + std::exp(margin));
  return -label * sig_neg;
}

std::string to_string(const AggregateLossSpec& spec) {
  switch (spec.kind) {
    case AggregateKind::Average: return "average";
    case AggregateKind::TopK: return "top-" + std::to_string(spec.k);
    case AggregateKind::AverageTopK: return "atk-" + std::to_string(spec.k);
    case AggregateKind::CloseK: return "close-" + std::to_string(spec.k);
  }
  return "?";
}

double big_m(std::span<const double> losses) {
  double largest = 0.0;
  for (double l : losses) largest = std::max(largest, l);
  return std::max(10.0, 10.0 * largest);
}

std::vector<std::size_t> select_close_k(std::span<const double> losses,
                                        double threshold, std::size_t k) {
  if (losses.empty()) throw ArgumentError("select_close_k on an empty loss vector");
  check_k(k, losses.size());
  std::vector<double> distance(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (!std::isfinite(losses[i])) throw DivergenceError("non-finite individual loss");
    distance[i] = std::abs(losses[i] - threshold);
  }
  std::vector<std::size_t> order(losses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto nearer = [&](std::size_t a, std::size_t b) {
    if (distance[a] != distance[b]) return distance[a] < distance[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), nearer);
  order.resize(k);
  return order;
}

namespace {

LossReport close_k_report(std::span<const double> losses, double threshold,
                          std::size_t k, double m) {
  const double largest = *std::max_element(losses.begin(), losses.end());
  if (!(m >= largest)) {
    throw ArgumentError("close-k constant M is smaller than the largest loss");
  }
  LossReport report;
  report.big_m = m;
  report.selected = select_close_k(losses, threshold, k);
  report.mask.assign(losses.size(), false);
  for (std::size_t i : report.selected) report.mask[i] = true;
  double total = 0.0;
  for (std::size_t i : report.selected) total += losses[i];
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (!report.mask[i] && losses[i] >= threshold) total += m;
  }
  report.value = total;
  return report;
}

}  // namespace

double close_k_value(std::span<const double> losses, double threshold,
                     std::size_t k, double m) {
  if (losses.empty()) throw ArgumentError("close_k_value on an empty loss vector");
  return close_k_report(losses, threshold, k, m).value;
}

LossReport aggregate_value_and_mask(const AggregateLossSpec& spec,
                                    std::span<const double> losses,
                                    double threshold) {
  const double m = spec.kind == AggregateKind::CloseK ? big_m(losses) : 0.0;
  return aggregate_value_and_mask(spec, losses, threshold, m);
}

LossReport aggregate_value_and_mask(const AggregateLossSpec& spec,
                                    std::span<const double> losses,
                                    double threshold, double m) {
  const std::size_t n = losses.size();
  if (n == 0) throw ArgumentError("aggregate loss over an empty batch");
  for (double l : losses) {
    if (!std::isfinite(l)) throw DivergenceError("non-finite individual loss");
  }

  LossReport report;
  switch (spec.kind) {
    case AggregateKind::Average: {
      report.selected.resize(n);
      std::iota(report.selected.begin(), report.selected.end(), std::size_t{0});
      report.mask.assign(n, true);
      report.value = std::accumulate(losses.begin(), losses.end(), 0.0) /
                     static_cast<double>(n);
      return report;
    }
    case AggregateKind::TopK: {
      check_k(spec.k, n);
      const auto order = largest_k(losses, spec.k);
      report.selected = {order.back()};
      report.mask.assign(n, false);
      report.mask[order.back()] = true;
      report.value = losses[order.back()];
      return report;
    }
    case AggregateKind::AverageTopK: {
      check_k(spec.k, n);
      report.selected = largest_k(losses, spec.k);
      report.mask.assign(n, false);
      double total = 0.0;
      for (std::size_t i : report.selected) {
        report.mask[i] = true;
        total += losses[i];
      }
      report.value = total / static_cast<double>(spec.k);
      return report;
    }
    case AggregateKind::CloseK:
      check_k(spec.k, n);
      return close_k_report(losses, threshold, spec.k, m);
  }
  throw ArgumentError("unknown aggregate kind");
}

std::vector<double> aggregate_weights(const AggregateLossSpec& spec,
                                      const LossReport& report, std::size_t n) {
  double w = 1.0;
  if (spec.kind == AggregateKind::Average) w = 1.0 / static_cast<double>(n);
  if (spec.kind == AggregateKind::AverageTopK) w = 1.0 / static_cast<double>(spec.k);
  return std::vector<double>(report.selected.size(), w);
}

std::size_t count_incorrect(std::span<const double> losses, double threshold) {
  return static_cast<std::size_t>(
      std::count_if(losses.begin(), losses.end(),
                    [threshold](double l) { return l >= threshold; }));
}

}  // namespace closek
