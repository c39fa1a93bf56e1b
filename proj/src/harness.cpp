#include "closek/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "closek/errors.hpp"
#include "closek/format.hpp"
#include "closek/preprocess.hpp"
#include "closek/stats.hpp"

namespace closek {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Close: return "close";
    case Method::CloseDecay: return "close_decay";
    case Method::Atk: return "atk";
    case Method::Average: return "average";
    case Method::Top: return "top";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  if (name == "close-decay" || name == "decay") return Method::CloseDecay;
  throw ArgumentError("unknown method '" + std::string(name) + "'");
}

bool uses_k(Method method) { return method != Method::Average; }

Objective objective_for(Method method, std::size_t k) {
  switch (method) {
    case Method::Close: return AggregateLossSpec::close_k(k);
    case Method::CloseDecay: return CloseDecay{k};
    case Method::Atk: return AggregateLossSpec::average_top_k(k);
    case Method::Average: return AggregateLossSpec::average();
    case Method::Top: return AggregateLossSpec::top_k(k);
  }
  return AggregateLossSpec::average();
}

std::vector<double> standard_lambdas() {
  std::vector<double> out;
  for (int e = -5; e <= 5; ++e) out.push_back(std::pow(10.0, e));
  return out;
}

std::vector<std::size_t> standard_ks(std::size_t n_train) {
  std::vector<std::size_t> out;
  for (std::size_t k = 10; k < n_train; k *= 10) out.push_back(k);
  out.push_back(n_train);
  return out;
}

GridSpec GridSpec::standard(std::size_t n_train) { return {standard_lambdas(), standard_ks(n_train)}; }

void ProtocolConfig::validate() const {
  if (methods.empty()) throw ArgumentError("no methods selected");
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      if (methods[i] == methods[j]) {
        throw ArgumentError("method '" + std::string(to_string(methods[i])) + "' listed twice");
      }
    }
  }
  if (epochs == 0) throw ArgumentError("epochs must be positive");
  if (epochs % 3 != 0 && std::find(methods.begin(), methods.end(), Method::CloseDecay) != methods.end()) {
    throw ArgumentError("close_decay needs epochs divisible by 3");
  }
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
    throw ArgumentError("learning rate must be finite and non-negative");
  }
  if (split_count == 0) throw ArgumentError("split count must be positive");
  if (jobs == 0) throw ArgumentError("jobs must be positive");
  if (lambdas) {
    if (lambdas->empty()) throw ArgumentError("lambda grid is empty");
    for (double l : *lambdas) {
      if (!std::isfinite(l) || l < 0.0) throw ArgumentError("lambda values must be finite and >= 0");
    }
  }
  if (ks) {
    if (ks->empty()) throw ArgumentError("k grid is empty");
    for (std::size_t k : *ks) {
      if (k == 0) throw ArgumentError("k values must be positive");
    }
  }
}

GridSpec ProtocolConfig::grid(std::size_t n_train) const {
  GridSpec g = GridSpec::standard(n_train);
  if (lambdas) {
    g.lambdas = *lambdas;
    std::sort(g.lambdas.begin(), g.lambdas.end());
    g.lambdas.erase(std::unique(g.lambdas.begin(), g.lambdas.end()), g.lambdas.end());
  }
  if (ks) {
    g.ks.clear();
    for (std::size_t k : *ks) {
      if (k <= n_train) g.ks.push_back(k);
    }
    std::sort(g.ks.begin(), g.ks.end());
    g.ks.erase(std::unique(g.ks.begin(), g.ks.end()), g.ks.end());
    if (g.ks.empty()) g.ks.push_back(n_train);
  }
  return g;
}

std::vector<double> MethodResult::test_accuracies() const {
  std::vector<double> out;
  out.reserve(splits.size());
  for (const auto& s : splits) out.push_back(s.test_accuracy);
  return out;
}

double MethodResult::mean_test_accuracy() const {
  if (splits.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& s : splits) sum += s.test_accuracy;
  return sum / static_cast<double>(splits.size());
}

const MethodResult* ProtocolResult::find(Method method) const {
  for (const auto& m : methods) {
    if (m.method == method) return &m;
  }
  return nullptr;
}

namespace {

double majority_fraction(const LabeledDataset& data) {
  const std::size_t pos = data.count_label(1);
  return static_cast<double>(std::max(pos, data.size() - pos)) / static_cast<double>(data.size());
}

struct PreparedSplit {
  LabeledDataset train;
  LabeledDataset valid;
  LabeledDataset test;
  GridSpec grid;
};

PreparedSplit prepare(const LabeledDataset& dataset, const ProtocolConfig& config,
                      const ProtocolHooks& hooks, std::size_t s) {
  SplitSpec spec;
  spec.seed = config.seed_base + s;
  const Split split = sample_split(dataset.size(), spec);
  SplitData views{dataset.subset(split.train), dataset.subset(split.valid), dataset.subset(split.test)};
  if (hooks.transform) hooks.transform(views, s);
  if (views.train.count_label(1) == 0 || views.train.count_label(-1) == 0) {
    throw DatasetError(DatasetProblem::SingleClass, "'" + dataset.name + "' split " + std::to_string(s) +
                                                        " has a single-class training view");
  }
  const Standardizer z = Standardizer::fit(views.train.features);
  PreparedSplit out{z.apply(views.train), z.apply(views.valid), z.apply(views.test),
                    config.grid(views.train.size())};
  return out;
}

double accuracy(const Model& model, const LabeledDataset& data) {
  return 1.0 - zero_one_error(model, data);
}

std::string point_label(double lambda, Method method, std::size_t k) {
  std::string out = "lambda=" + format_double(lambda);
  if (uses_k(method)) out += " k=" + std::to_string(k);
  return out;
}

SplitOutcome select_on_split(const LabeledDataset& dataset, const PreparedSplit& data,
                             const ProtocolConfig& config, Method method, std::size_t s) {
  const IndividualLoss loss(config.loss);
  const std::vector<std::size_t> no_k{0};
  const auto& ks = uses_k(method) ? data.grid.ks : no_k;

  SplitOutcome best;
  best.split = s;
  best.n_train = data.train.size();
  bool have = false;
  std::string last_failure;
  for (double lambda : data.grid.lambdas) {
    for (std::size_t k : ks) {
      TrainConfig tc;
      tc.epochs = config.epochs;
      tc.learning_rate = config.learning_rate;
      tc.lambda = lambda;
      tc.seed = config.seed_base + s;
      try {
        const TrainResult fit = train(config.family, data.train, loss, objective_for(method, k), tc);
        const double valid = accuracy(fit.model, data.valid);
        if (!have || valid > best.valid_accuracy) {
          have = true;
          best.valid_accuracy = valid;
          best.test_accuracy = accuracy(fit.model, data.test);
          best.train_accuracy = accuracy(fit.model, data.train);
          best.selected_lambda = lambda;
          best.selected_k = k;
        }
      } catch (const DivergenceError& e) {
        ++best.diverged;
        last_failure = point_label(lambda, method, k) + ": " + e.what();
      }
    }
  }
  if (!have) {
    throw DivergenceError("'" + dataset.name + "' split " + std::to_string(s) + " method " +
                          std::string(to_string(method)) + ": every grid point diverged (last " +
                          last_failure + ")");
  }
  return best;
}

// Runs fn(i) for i in [0, count) on `jobs` threads. Rethrows the exception of
// the lowest failing index so failures do not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(jobs, count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

ProtocolResult run_protocol(const LabeledDataset& dataset, const ProtocolConfig& config,
                            const ProtocolHooks& hooks) {
  config.validate();
  dataset.validate();

  std::vector<PreparedSplit> splits;
  splits.reserve(config.split_count);
  for (std::size_t s = 0; s < config.split_count; ++s) splits.push_back(prepare(dataset, config, hooks, s));

  ProtocolResult result;
  result.dataset = dataset.name;
  result.family = config.family;
  result.loss = config.loss;
  for (const auto& sp : splits) result.test_majority.push_back(majority_fraction(sp.test));

  const std::size_t m = config.methods.size();
  std::vector<SplitOutcome> outcomes(config.split_count * m);
  std::vector<std::size_t> pending;
  for (std::size_t s = 0; s < config.split_count; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      std::optional<SplitOutcome> stored;
      if (hooks.lookup) stored = hooks.lookup(s, config.methods[j]);
      if (stored) {
        outcomes[s * m + j] = *stored;
        outcomes[s * m + j].split = s;
      } else {
        pending.push_back(s * m + j);
      }
    }
  }

  std::mutex report_mutex;
  parallel_for(pending.size(), config.jobs, [&](std::size_t p) {
    const std::size_t item = pending[p];
    const std::size_t s = item / m;
    const Method method = config.methods[item % m];
    SplitOutcome outcome = select_on_split(dataset, splits[s], config, method, s);
    outcomes[item] = outcome;
    if (hooks.on_complete) {
      const std::lock_guard lock(report_mutex);
      hooks.on_complete(s, method, outcome);
    }
  });

  for (std::size_t j = 0; j < m; ++j) {
    MethodResult mr;
    mr.method = config.methods[j];
    for (std::size_t s = 0; s < config.split_count; ++s) mr.splits.push_back(outcomes[s * m + j]);
    result.methods.push_back(std::move(mr));
  }
  return result;
}

Comparison compare(const MethodResult& a, const MethodResult& b) {
  if (a.splits.size() != b.splits.size()) throw ArgumentError("compared results differ in split count");
  for (std::size_t s = 0; s < a.splits.size(); ++s) {
    if (a.splits[s].split != b.splits[s].split) throw ArgumentError("compared results use different splits");
  }
  const auto ta = a.test_accuracies();
  const auto tb = b.test_accuracies();
  const PairedTest t = paired_t_test(ta, tb);
  return {t.p_value, t.mean_diff};
}

bool significantly_better(const Comparison& c) { return c.p_value <= 0.05 && c.mean_diff > 0.0; }

ComparisonMatrix build_matrix(const std::vector<ProtocolResult>& results) {
  std::map<std::pair<int, int>, std::vector<const ProtocolResult*>> groups;
  for (const auto& r : results) {
    groups[{static_cast<int>(r.family), static_cast<int>(r.loss)}].push_back(&r);
  }
  ComparisonMatrix out;
  for (const auto& [key, members] : groups) {
    MatrixBlock block;
    block.family = static_cast<ModelFamily>(key.first);
    block.loss = static_cast<LossKind>(key.second);
    block.datasets = members.size();
    for (Method method : kAllMethods) {
      const bool everywhere = std::all_of(members.begin(), members.end(),
                                          [&](const ProtocolResult* r) { return r->find(method) != nullptr; });
      if (everywhere) block.methods.push_back(method);
    }
    const std::size_t m = block.methods.size();
    block.significant.assign(m, std::vector<std::optional<double>>(m));
    block.improved.assign(m, std::vector<std::optional<double>>(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        std::size_t wins = 0;
        std::size_t gains = 0;
        for (const ProtocolResult* r : members) {
          const Comparison c = compare(*r->find(block.methods[i]), *r->find(block.methods[j]));
          wins += significantly_better(c) ? 1 : 0;
          gains += c.mean_diff >= 0.02 - 1e-12 ? 1 : 0;
        }
        const double n = static_cast<double>(members.size());
        block.significant[i][j] = static_cast<double>(wins) / n;
        block.improved[i][j] = static_cast<double>(gains) / n;
      }
    }
    out.blocks.push_back(std::move(block));
  }
  return out;
}

std::vector<KStarRow> k_star_summary(const std::vector<ProtocolResult>& results) {
  std::vector<KStarRow> rows;
  for (const auto& r : results) {
    const MethodResult* decay = r.find(Method::CloseDecay);
    const MethodResult* average = r.find(Method::Average);
    if (decay == nullptr || average == nullptr || decay->splits.empty()) continue;
    KStarRow row;
    row.dataset = r.dataset;
    row.family = r.family;
    row.loss = r.loss;
    for (const auto& s : decay->splits) {
      row.k_ratio += static_cast<double>(s.selected_k) / static_cast<double>(s.n_train);
    }
    row.k_ratio /= static_cast<double>(decay->splits.size());
    row.delta = decay->mean_test_accuracy() - average->mean_test_accuracy();
    rows.push_back(row);
  }
  return rows;
}

SweepConfig make_sweep_config() {
  SweepConfig c;
  c.protocol.split_count = 5;
  return c;
}

std::vector<SweepRow> simulate_sweep(const LabeledDataset& base, Corruption corruption,
                                     const std::vector<double>& levels, const SweepConfig& config) {
  if (levels.empty()) throw ArgumentError("no corruption levels given");
  if (base.count_label(1) == 0 || base.count_label(-1) == 0) {
    throw DatasetError(DatasetProblem::SingleClass, "'" + base.name + "' needs both classes");
  }
  for (double level : levels) {
    if (level == 0.0) continue;
    const bool ok = corruption == Corruption::Imbalance ? level > 0.5 && level < 1.0 : level > 0.0 && level < 1.0;
    if (!ok) {
      throw ArgumentError("level " + format_double(level) + " is out of range for " +
                          std::string(to_string(corruption)));
    }
  }
  const bool eval_too = config.corrupt_eval && corruption != Corruption::Outliers;
  std::vector<SweepRow> rows;
  for (double level : levels) {
    ProtocolHooks hooks;
    hooks.transform = [&](SplitData& views, std::size_t s) {
      const std::uint64_t seed = (config.protocol.seed_base + s) * 0x9E3779B97F4A7C15ULL + 1;
      views.train = apply_corruption(views.train, corruption, level, seed);
      if (eval_too) {
        views.valid = apply_corruption(views.valid, corruption, level, seed + 1);
        views.test = apply_corruption(views.test, corruption, level, seed + 2);
      }
    };
    const ProtocolResult r = run_protocol(base, config.protocol, hooks);
    double baseline = 0.0;
    for (double b : r.test_majority) baseline += b;
    baseline /= static_cast<double>(r.test_majority.size());
    for (const auto& mr : r.methods) {
      SweepRow row;
      row.level = level;
      row.method = mr.method;
      row.mean_test_accuracy = mr.mean_test_accuracy();
      for (const auto& s : mr.splits) row.mean_train_accuracy += s.train_accuracy;
      row.mean_train_accuracy /= static_cast<double>(mr.splits.size());
      row.majority_baseline = baseline;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace closek
