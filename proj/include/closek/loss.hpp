#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace closek {

// ---------------------------------------------------------------------------
// Individual (per-example) surrogate losses
// ---------------------------------------------------------------------------

enum class LossKind { Logistic, Hinge };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

/// A surrogate loss together with its correctness threshold T: an example
/// with loss strictly below T is classified correctly (positive margin).
/// Loss exactly equal to T (zero margin) counts as incorrect.
class IndividualLoss {
 public:
  explicit IndividualLoss(LossKind kind);

  static IndividualLoss logistic() { return IndividualLoss(LossKind::Logistic); }
  static IndividualLoss hinge() { return IndividualLoss(LossKind::Hinge); }

  LossKind kind() const noexcept { return kind_; }
  double threshold() const noexcept { return threshold_; }

  /// l(y, score). Throws DivergenceError on a non-finite score and
  /// ArgumentError on a label outside {-1, +1}.
  double value(int label, double score) const;

  /// dl/dscore. The hinge subgradient at margin exactly 1 is 0.
  double derivative(int label, double score) const;

  bool is_correct(double loss) const noexcept { return loss < threshold_; }

 private:
  LossKind kind_;
  double threshold_;
};

// ---------------------------------------------------------------------------
// Aggregate losses
// ---------------------------------------------------------------------------

enum class AggregateKind { Average, TopK, AverageTopK, CloseK };

struct AggregateLossSpec {
  AggregateKind kind = AggregateKind::Average;
  std::size_t k = 0;  // unused for Average

  static AggregateLossSpec average() { return {AggregateKind::Average, 0}; }
  static AggregateLossSpec top_k(std::size_t k) { return {AggregateKind::TopK, k}; }
  static AggregateLossSpec average_top_k(std::size_t k) {
    return {AggregateKind::AverageTopK, k};
  }
  static AggregateLossSpec close_k(std::size_t k) { return {AggregateKind::CloseK, k}; }

  bool operator==(const AggregateLossSpec&) const = default;
};

std::string to_string(const AggregateLossSpec& spec);

struct LossReport {
  double value = 0.0;
  /// Examples that carry gradient, in selection order.
  std::vector<std::size_t> selected;
  std::vector<bool> mask;
  /// The large constant used for CloseK; 0 for the other aggregates.
  double big_m = 0.0;
};

/// M used for close-k evaluation: max(10, 10 * largest loss in the batch).
double big_m(std::span<const double> losses);

/// Indices ordered by |loss - T| ascending (ties by index), first k kept.
std::vector<std::size_t> select_close_k(std::span<const double> losses,
                                        double threshold, std::size_t k);

/// Close-k value: the k losses nearest T, plus M for every other example
/// with loss >= T. Requires M >= max(losses).
double close_k_value(std::span<const double> losses, double threshold,
                     std::size_t k, double big_m);

/// Evaluates the aggregate and its gradient mask. CloseK uses big_m(losses).
LossReport aggregate_value_and_mask(const AggregateLossSpec& spec,
                                    std::span<const double> losses,
                                    double threshold);

/// Same as above with an explicit M for CloseK (ignored otherwise).
LossReport aggregate_value_and_mask(const AggregateLossSpec& spec,
                                    std::span<const double> losses,
                                    double threshold, double big_m);

/// d(aggregate value)/d(loss_i) for each selected example: 1/n for Average,
/// 1/k for AverageTopK, 1 for TopK and CloseK. Indexed like `report.selected`.
std::vector<double> aggregate_weights(const AggregateLossSpec& spec,
                                      const LossReport& report,
                                      std::size_t n);

/// Number of misclassified examples (loss >= T).
std::size_t count_incorrect(std::span<const double> losses, double threshold);

}  // namespace closek
