#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <variant>
#include <vector>

#include "closek/dataset.hpp"
#include "closek/loss.hpp"
#include "closek/model.hpp"

namespace closek {

/// Decaying-k objective: k = n for the first third of the epochs, a linear
/// decay to k_star over the middle third, then k_star.
struct CloseDecay {
  std::size_t k_star = 1;
};

using Objective = std::variant<AggregateLossSpec, CloseDecay>;

struct TrainConfig {
  std::size_t epochs = 300;
  double learning_rate = 0.1;
  double lambda = 0.0;
  std::uint64_t seed = 0;  // model initialization

  /// Throws ArgumentError on invalid settings for the given objective.
  void validate(const Objective& objective) const;
};

/// k used at epoch i (1-based) of the decaying schedule.
std::size_t schedule_k(std::size_t epoch, std::size_t epochs, std::size_t n, std::size_t k_star);

struct TraceRow {
  std::size_t epoch = 0;
  std::size_t k = 0;
  double aggregate_loss = 0.0;
  double train_01_error = 0.0;
  /// Aggregate plus lambda * ||weights||^2 (the quantity being descended).
  double objective = 0.0;
  /// Close-k constant in force for this epoch; 0 for other aggregates.
  double big_m = 0.0;
};

struct TrainResult {
  Model model;
  std::vector<TraceRow> trace;
};

/// Per-example losses of `model` on `data`.
std::vector<double> individual_losses(const Model& model, const LabeledDataset& data,
                                      const IndividualLoss& loss);

/// Fraction of examples with non-positive margin.
double zero_one_error(const Model& model, const LabeledDataset& data);
std::size_t zero_one_count(const Model& model, const LabeledDataset& data);

/// Exact gradient of the aggregate value (no regularization) with respect to
/// the model parameters, for the selection recorded in `report`.
GradientBuffer aggregate_gradient(const Model& model, const LabeledDataset& data,
                                  const IndividualLoss& loss, const AggregateLossSpec& spec,
                                  const LossReport& report);

/// Full-batch gradient descent for `config.epochs` steps. Each step selects
/// examples with the aggregate's mask and descends on the mean selected
/// loss. Throws DivergenceError (carrying the epoch) on non-finite values.
TrainResult train(Model initial, const LabeledDataset& data, const IndividualLoss& loss,
                  const Objective& objective, const TrainConfig& config);

/// Convenience overload initializing the model from `config.seed`.
TrainResult train(ModelFamily family, const LabeledDataset& data, const IndividualLoss& loss,
                  const Objective& objective, const TrainConfig& config);

/// CSV with columns epoch,k,aggregate_loss,train_01_error.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace closek
