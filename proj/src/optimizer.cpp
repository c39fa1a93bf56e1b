#include "closek/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "closek/errors.hpp"
#include "closek/format.hpp"

namespace closek {

void TrainConfig::validate(const Objective& objective) const {
  if (epochs == 0) throw ArgumentError("epochs must be positive");
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
    throw ArgumentError("learning rate must be finite and non-negative");
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw ArgumentError("lambda must be finite and non-negative");
  }
  if (const auto* decay = std::get_if<CloseDecay>(&objective)) {
    if (epochs < 3 || epochs % 3 != 0) {
      throw ArgumentError("close-decay needs epochs >= 3 and divisible by 3");
    }
    if (decay->k_star == 0) throw ArgumentError("k_star must be positive");
  }
}

std::size_t schedule_k(std::size_t epoch, std::size_t epochs, std::size_t n, std::size_t k_star) {
  if (k_star < 1 || k_star > n) {
    throw ArgumentError("k_star=" + std::to_string(k_star) + " outside [1, n=" +
                        std::to_string(n) + "]");
  }
  if (epochs == 0 || epoch < 1 || epoch > epochs) {
    throw ArgumentError("epoch index outside [1, epochs]");
  }
  if (3 * epoch < epochs) return n;
  if (3 * epoch < 2 * epochs) {
    // k* + round((n - k*)(2E - 3i)/E), rounded half up in integers.
    const std::size_t numerator = (n - k_star) * (2 * epochs - 3 * epoch);
    const std::size_t offset = (2 * numerator + epochs) / (2 * epochs);
    return std::min(n, k_star + offset);
  }
  return k_star;
}

std::vector<double> individual_losses(const Model& model, const LabeledDataset& data,
                                      const IndividualLoss& loss) {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out[i] = loss.value(data.labels[i], model.forward(data.features.row(i)));
  }
  return out;
}

std::size_t zero_one_count(const Model& model, const LabeledDataset& data) {
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double margin = data.labels[i] * model.forward(data.features.row(i));
    // NaN margins fail the comparison and count as errors.
    if (!(margin > 0.0)) ++wrong;
  }
  return wrong;
}

double zero_one_error(const Model& model, const LabeledDataset& data) {
  if (data.size() == 0) return 0.0;
  return static_cast<double>(zero_one_count(model, data)) / static_cast<double>(data.size());
}

GradientBuffer aggregate_gradient(const Model& model, const LabeledDataset& data,
                                  const IndividualLoss& loss, const AggregateLossSpec& spec,
                                  const LossReport& report) {
  GradientBuffer grads(model);
  const auto weights = aggregate_weights(spec, report, data.size());
  for (std::size_t s = 0; s < report.selected.size(); ++s) {
    const std::size_t i = report.selected[s];
    const auto x = data.features.row(i);
    const double upstream = weights[s] * loss.derivative(data.labels[i], model.forward(x));
    model.backward(x, upstream, grads);
  }
  return grads;
}

TrainResult train(Model initial, const LabeledDataset& data, const IndividualLoss& loss,
                  const Objective& objective, const TrainConfig& config) {
  config.validate(objective);
  if (data.size() == 0) throw ArgumentError("training set is empty");
  data.validate();
  if (data.dim() != initial.input_dim()) {
    throw ArgumentError("dataset dimension does not match the model");
  }
  const std::size_t n = data.size();
  if (const auto* decay = std::get_if<CloseDecay>(&objective); decay && decay->k_star > n) {
    throw ArgumentError("k_star=" + std::to_string(decay->k_star) + " exceeds n=" + std::to_string(n));
  }

  TrainResult result{std::move(initial), {}};
  Model& model = result.model;
  result.trace.reserve(config.epochs);
  GradientBuffer grads(model);

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    try {
      AggregateLossSpec spec;
      if (const auto* decay = std::get_if<CloseDecay>(&objective)) {
        spec = AggregateLossSpec::close_k(schedule_k(epoch, config.epochs, n, decay->k_star));
      } else {
        spec = std::get<AggregateLossSpec>(objective);
      }

      std::vector<double> scores(n);
      std::vector<double> losses(n);
      for (std::size_t i = 0; i < n; ++i) {
        scores[i] = model.forward(data.features.row(i));
        losses[i] = loss.value(data.labels[i], scores[i]);
      }
      const LossReport report = aggregate_value_and_mask(spec, losses, loss.threshold());

      TraceRow row;
      row.epoch = epoch;
      row.k = spec.kind == AggregateKind::Average ? n : spec.k;
      row.aggregate_loss = report.value;
      row.train_01_error =
          static_cast<double>(count_incorrect(losses, loss.threshold())) / static_cast<double>(n);
      row.big_m = report.big_m;

      // Close-k steps use the selected-example mean so that k = n coincides
      // with the average loss; other aggregates use their exact gradient.
      const double step_scale =
          spec.kind == AggregateKind::CloseK ? 1.0 / static_cast<double>(spec.k) : 1.0;
      row.objective = report.value * step_scale + config.lambda * model.weight_norm_sq();
      if (!std::isfinite(row.objective)) throw DivergenceError("non-finite objective");
      result.trace.push_back(row);

      grads.zero();
      const auto weights = aggregate_weights(spec, report, n);
      for (std::size_t s = 0; s < report.selected.size(); ++s) {
        const std::size_t i = report.selected[s];
        const double upstream =
            step_scale * weights[s] * loss.derivative(data.labels[i], scores[i]);
        model.backward(data.features.row(i), upstream, grads);
      }
      apply_update(model, grads, config.learning_rate, config.lambda);
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string(e.what()) + " at epoch " + std::to_string(epoch), epoch);
    }
  }
  return result;
}

TrainResult train(ModelFamily family, const LabeledDataset& data, const IndividualLoss& loss,
                  const Objective& objective, const TrainConfig& config) {
  return train(Model::initial(family, data.dim(), config.seed), data, loss, objective, config);
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "epoch,k,aggregate_loss,train_01_error\n";
  for (const auto& row : trace) {
    out << row.epoch << ',' << row.k << ',' << format_double(row.aggregate_loss) << ','
        << format_double(row.train_01_error) << '\n';
  }
}

}  // namespace closek
