#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "closek/corruption.hpp"
#include "closek/dataset.hpp"
#include "closek/loss.hpp"
#include "closek/model.hpp"
#include "closek/optimizer.hpp"

namespace closek {

enum class Method { Close, CloseDecay, Atk, Average, Top };

inline constexpr std::array<Method, 5> kAllMethods = {
    Method::Close, Method::CloseDecay, Method::Atk, Method::Average, Method::Top};

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

/// Whether the method is tuned over k in addition to lambda.
bool uses_k(Method method);

/// Training objective for a method at a given k (ignored for Average).
Objective objective_for(Method method, std::size_t k);

struct GridSpec {
  std::vector<double> lambdas;
  std::vector<std::size_t> ks;

  /// lambdas 1e-5 .. 1e5; ks 10, 100, ... up to 10^floor(log10 n), then n.
  static GridSpec standard(std::size_t n_train);
};

std::vector<double> standard_lambdas();
std::vector<std::size_t> standard_ks(std::size_t n_train);

struct ProtocolConfig {
  ModelFamily family = ModelFamily::Linear;
  LossKind loss = LossKind::Logistic;
  std::vector<Method> methods{kAllMethods.begin(), kAllMethods.end()};
  std::size_t epochs = 300;
  double learning_rate = 0.1;
  std::uint64_t seed_base = 0;
  std::size_t split_count = 25;
  /// Replace the standard grids when set. ks larger than the training split
  /// are dropped, and n_train is appended when nothing remains.
  std::optional<std::vector<double>> lambdas;
  std::optional<std::vector<std::size_t>> ks;
  std::size_t jobs = 1;

  void validate() const;
  GridSpec grid(std::size_t n_train) const;
};

/// Outcome of model selection on one split for one method.
struct SplitOutcome {
  std::size_t split = 0;
  double test_accuracy = 0.0;
  double valid_accuracy = 0.0;
  double train_accuracy = 0.0;
  double selected_lambda = 0.0;
  std::size_t selected_k = 0;  // 0 for Average
  std::size_t n_train = 0;
  std::size_t diverged = 0;  // grid points skipped for divergence
};

struct MethodResult {
  Method method = Method::Average;
  std::vector<SplitOutcome> splits;

  std::vector<double> test_accuracies() const;
  double mean_test_accuracy() const;
};

struct ProtocolResult {
  std::string dataset;
  ModelFamily family = ModelFamily::Linear;
  LossKind loss = LossKind::Logistic;
  std::vector<MethodResult> methods;  // in config order
  /// Majority-class accuracy on each split's (possibly transformed) test labels.
  std::vector<double> test_majority;

  const MethodResult* find(Method method) const;
};

/// The three views of one split, before standardization.
struct SplitData {
  LabeledDataset train;
  LabeledDataset valid;
  LabeledDataset test;
};

struct ProtocolHooks {
  /// Returns a stored outcome to skip recomputing (split, method).
  std::function<std::optional<SplitOutcome>(std::size_t split, Method)> lookup;
  /// Called once per freshly computed (split, method), possibly from a worker
  /// thread but never concurrently.
  std::function<void(std::size_t split, Method, const SplitOutcome&)> on_complete;
  /// Rewrites a split before standardization (used by the simulation sweeps).
  std::function<void(SplitData&, std::size_t split)> transform;
};

/// Runs split_count random 50/25/25 splits; for each split and method, trains
/// every grid point on the standardized training view, keeps the model with
/// the best validation accuracy (ties: smaller lambda, then smaller k) and
/// records its test accuracy. Diverged grid points are skipped; a
/// DivergenceError with context is thrown only if every point diverges.
ProtocolResult run_protocol(const LabeledDataset& dataset, const ProtocolConfig& config,
                            const ProtocolHooks& hooks = {});

struct Comparison {
  double p_value = 1.0;
  double mean_diff = 0.0;  // mean(b - a)
};

/// Two-sided paired t-test over the per-split test accuracies.
Comparison compare(const MethodResult& a, const MethodResult& b);

/// Whether b significantly outperforms a.
bool significantly_better(const Comparison& c);

struct MatrixBlock {
  ModelFamily family = ModelFamily::Linear;
  LossKind loss = LossKind::Logistic;
  std::vector<Method> methods;
  std::size_t datasets = 0;
  /// [i][j]: fraction of datasets where method j beats method i at p <= 0.05.
  /// Diagonal entries are empty.
  std::vector<std::vector<std::optional<double>>> significant;
  /// [i][j]: fraction of datasets where mean(j - i) >= 0.02.
  std::vector<std::vector<std::optional<double>>> improved;
};

struct ComparisonMatrix {
  std::vector<MatrixBlock> blocks;
};

/// One block per (family, loss), ordered by family then loss. A block's
/// methods are those present in every one of its datasets.
ComparisonMatrix build_matrix(const std::vector<ProtocolResult>& results);

struct KStarRow {
  std::string dataset;
  ModelFamily family = ModelFamily::Linear;
  LossKind loss = LossKind::Logistic;
  double k_ratio = 0.0;  // mean over splits of k* / n_train
  double delta = 0.0;    // mean close_decay - mean average test accuracy
};

/// One row per result holding both close_decay and average.
std::vector<KStarRow> k_star_summary(const std::vector<ProtocolResult>& results);

struct SweepRow {
  double level = 0.0;
  Method method = Method::Average;
  double mean_test_accuracy = 0.0;
  double mean_train_accuracy = 0.0;
  double majority_baseline = 0.0;
};

struct SweepConfig {
  ProtocolConfig protocol;  // split_count defaults to 5 via make_sweep_config
  /// Also apply Imbalance / Ambiguous transforms to validation and test.
  bool corrupt_eval = false;
};

SweepConfig make_sweep_config();

/// For each level, corrupts the training portion of every split, reruns the
/// protocol (selection included) and reports per-method mean accuracy plus
/// the majority-class baseline on the test labels.
std::vector<SweepRow> simulate_sweep(const LabeledDataset& base, Corruption corruption,
                                     const std::vector<double>& levels, const SweepConfig& config);

}  // namespace closek
