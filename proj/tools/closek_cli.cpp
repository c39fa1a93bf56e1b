// closek: generate synthetic data, train one model, run the benchmark
// protocol, or sweep a corruption level.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "closek/corruption.hpp"
#include "closek/errors.hpp"
#include "closek/format.hpp"
#include "closek/generators.hpp"
#include "closek/harness.hpp"
#include "closek/optimizer.hpp"
#include "closek/preprocess.hpp"
#include "closek/report.hpp"
#include "closek/run_config.hpp"
#include "closek/table_io.hpp"

namespace fs = std::filesystem;
using namespace closek;

namespace {

struct GenerateArgs {
  std::string name;
  std::string scenario = "easy";
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  double magnitude = 1000.0;
  std::string out;
};

struct TrainArgs {
  std::string data;
  std::string label_column = "target";
  std::string method = "close_decay";
  std::size_t k = 10;
  std::size_t k_star = 10;
  std::string loss = "logistic";
  std::string model = "linear";
  std::size_t epochs = 300;
  double lr = 0.1;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> split_seed;
  bool standardize = false;
  std::string model_out;
  std::string trace_out;
};

// Flags shared by bench and simulate; a config file overrides them.
struct ProtocolArgs {
  std::string config;
  std::string models = "linear";
  std::string losses = "logistic";
  std::string methods = "close,close_decay,atk,average,top";
  std::size_t epochs = 300;
  double lr = 0.1;
  std::uint64_t seed_base = 0;
  std::size_t splits = 25;
  std::string lambdas;
  std::string ks;
  std::size_t jobs = 1;
  std::string label_column = "target";
  std::string out;
};

struct BenchArgs {
  std::string manifest;
  bool resume = false;
};

struct SimulateArgs {
  std::string base;
  std::string corruption;
  std::string levels = "0,0.01,0.05,0.1";
  bool corrupt_eval = false;
};

void print_balance(const LabeledDataset& data) {
  const std::size_t pos = data.count_label(1);
  std::cout << "n=" << data.size() << " d=" << data.dim() << " positives=" << pos
            << " negatives=" << data.size() - pos
            << " positive_fraction=" << format_double(static_cast<double>(pos) / static_cast<double>(data.size()))
            << '\n';
}

int run_generate(const GenerateArgs& a) {
  LabeledDataset data;
  if (a.name == "example1") {
    data = gen_example1(a.n, a.magnitude);
  } else if (a.name == "example2") {
    data = gen_example2(a.n, a.seed);
  } else if (a.name == "figure1") {
    data = gen_figure1(parse_figure1_scenario(a.scenario), a.n, a.seed);
  } else {
    throw ArgumentError("unknown generator '" + a.name + "' (expected example1, example2 or figure1)");
  }
  write_table(fs::path(a.out), data);
  print_balance(data);
  return 0;
}

Objective train_objective(const TrainArgs& a) {
  const Method method = parse_method(a.method);
  return objective_for(method, method == Method::CloseDecay ? a.k_star : a.k);
}

void write_trace_meta(const fs::path& path, const TrainArgs& a, const TrainResult& result) {
  nlohmann::json doc;
  doc["method"] = a.method;
  doc["loss"] = a.loss;
  doc["model"] = a.model;
  doc["epochs"] = a.epochs;
  doc["learning_rate"] = a.lr;
  doc["lambda"] = a.lambda;
  doc["seed"] = a.seed;
  auto& m = doc["big_m"] = nlohmann::json::array();
  auto& objective = doc["objective"] = nlohmann::json::array();
  for (const auto& row : result.trace) {
    m.push_back(row.big_m);
    objective.push_back(row.objective);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

int run_train(const TrainArgs& a) {
  const LabeledDataset data = load_table(fs::path(a.data), a.label_column);
  const IndividualLoss loss(parse_loss_kind(a.loss));
  const ModelFamily family = parse_model_family(a.model);
  const Objective objective = train_objective(a);
  TrainConfig config;
  config.epochs = a.epochs;
  config.learning_rate = a.lr;
  config.lambda = a.lambda;
  config.seed = a.seed;

  LabeledDataset train_view = data;
  std::optional<LabeledDataset> test_view;
  if (a.split_seed) {
    SplitSpec spec;
    spec.seed = *a.split_seed;
    const Split split = sample_split(data.size(), spec);
    train_view = data.subset(split.train);
    test_view = data.subset(split.test);
  }
  if (a.standardize) {
    const Standardizer z = Standardizer::fit(train_view.features);
    train_view = z.apply(train_view);
    if (test_view) test_view = z.apply(*test_view);
  }

  const TrainResult result = train(family, train_view, loss, objective, config);

  if (!a.model_out.empty()) {
    std::ofstream out(a.model_out);
    if (!out) throw IoError("cannot write '" + a.model_out + "'");
    out << result.model.to_json().dump(2) << '\n';
    out.flush();
    if (!out) throw IoError("failed writing '" + a.model_out + "'");
  }
  if (!a.trace_out.empty()) {
    std::ofstream out(a.trace_out);
    if (!out) throw IoError("cannot write '" + a.trace_out + "'");
    write_trace_csv(out, result.trace);
    out.flush();
    if (!out) throw IoError("failed writing '" + a.trace_out + "'");
    write_trace_meta(fs::path(a.trace_out + ".meta.json"), a, result);
  }

  const std::size_t errors = zero_one_count(result.model, train_view);
  std::cout << "train_01_loss=" << errors << " train_01_error="
            << format_double(static_cast<double>(errors) / static_cast<double>(train_view.size())) << '\n';
  if (test_view) {
    const std::size_t test_errors = zero_one_count(result.model, *test_view);
    std::cout << "test_01_loss=" << test_errors << " test_01_error="
              << format_double(static_cast<double>(test_errors) / static_cast<double>(test_view->size()))
              << '\n';
  }
  return 0;
}

RunConfig run_config_from(const ProtocolArgs& a) {
  RunConfig rc;
  rc.families.clear();
  for (const auto& s : split_list(a.models)) rc.families.push_back(parse_model_family(s));
  rc.losses.clear();
  for (const auto& s : split_list(a.losses)) rc.losses.push_back(parse_loss_kind(s));
  rc.protocol.methods.clear();
  for (const auto& s : split_list(a.methods)) rc.protocol.methods.push_back(parse_method(s));
  rc.protocol.epochs = a.epochs;
  rc.protocol.learning_rate = a.lr;
  rc.protocol.seed_base = a.seed_base;
  rc.protocol.split_count = a.splits;
  if (!a.lambdas.empty()) rc.protocol.lambdas = parse_double_list(a.lambdas);
  if (!a.ks.empty()) rc.protocol.ks = parse_size_list(a.ks);
  if (!a.config.empty()) apply_config_file(fs::path(a.config), rc);
  rc.protocol.jobs = a.jobs;
  rc.validate();
  return rc;
}

std::vector<fs::path> manifest_datasets(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("manifest '" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".csv" || ext == ".tsv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int run_bench(const BenchArgs& b, ProtocolArgs a) {
  const fs::path manifest(b.manifest);
  const auto files = manifest_datasets(manifest);
  if (files.empty()) throw ArgumentError("manifest '" + manifest.string() + "' holds no .csv or .tsv datasets");
  if (a.config.empty() && fs::is_regular_file(manifest / "run.cfg")) a.config = (manifest / "run.cfg").string();
  const RunConfig rc = run_config_from(a);

  const fs::path out(a.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (!fs::is_directory(out)) throw IoError("cannot create output directory '" + out.string() + "'");
  ResumeLedger ledger(out / "ledger.csv", rc.fingerprint(), b.resume);
  if (b.resume) std::cout << "resuming with " << ledger.size() << " stored outcomes\n";

  std::vector<ProtocolResult> results;
  std::size_t warnings = 0;
  for (const auto& file : files) {
    LabeledDataset data;
    try {
      data = load_table(file, a.label_column);
    } catch (const Error& e) {
      ++warnings;
      std::cerr << "warning: skipping " << file.filename().string() << ": " << e.what() << '\n';
      continue;
    }
    for (ModelFamily family : rc.families) {
      for (LossKind loss : rc.losses) {
        ProtocolHooks hooks;
        hooks.lookup = [&](std::size_t split, Method method) {
          return ledger.lookup(data.name, family, loss, split, method);
        };
        hooks.on_complete = [&](std::size_t, Method method, const SplitOutcome& outcome) {
          ledger.record(data.name, family, loss, method, outcome);
        };
        try {
          results.push_back(run_protocol(data, rc.for_pair(family, loss), hooks));
          std::cout << "done " << data.name << ' ' << to_string(family) << ' ' << to_string(loss) << '\n';
        } catch (const IoError&) {
          throw;
        } catch (const Error& e) {
          ++warnings;
          std::cerr << "warning: " << data.name << ' ' << to_string(family) << ' ' << to_string(loss)
                    << " failed: " << e.what() << '\n';
        }
      }
    }
  }
  if (results.empty()) {
    throw DatasetError(DatasetProblem::Empty, "no dataset in the manifest completed the protocol");
  }
  write_bench_outputs(out, results);
  std::cout << "completed=" << results.size() << " warnings=" << warnings << " out=" << out.string() << '\n';
  return 0;
}

int run_simulate(const SimulateArgs& s, const ProtocolArgs& a) {
  const Corruption corruption = parse_corruption(s.corruption);
  const std::vector<double> levels = parse_double_list(s.levels);
  const RunConfig rc = run_config_from(a);
  if (rc.families.size() != 1 || rc.losses.size() != 1) {
    throw ArgumentError("simulate takes exactly one model family and one loss kind");
  }
  const LabeledDataset base = load_table(fs::path(s.base), a.label_column);
  SweepConfig config;
  config.protocol = rc.for_pair(rc.families.front(), rc.losses.front());
  config.corrupt_eval = s.corrupt_eval;
  const auto rows = simulate_sweep(base, corruption, levels, config);
  write_sweep_outputs(fs::path(a.out), corruption, rows);
  write_sweep_csv(std::cout, corruption, rows);
  return 0;
}

void add_protocol_flags(CLI::App* cmd, ProtocolArgs& a) {
  cmd->add_option("--config", a.config, "Run-config file (key = value); its keys override these flags");
  cmd->add_option("--model", a.models, "Model families, comma-separated: linear, residual_mlp");
  cmd->add_option("--loss", a.losses, "Individual losses, comma-separated: logistic, hinge");
  cmd->add_option("--methods", a.methods, "Methods, comma-separated: close, close_decay, atk, average, top");
  cmd->add_option("--epochs", a.epochs, "Gradient steps per fit");
  cmd->add_option("--lr", a.lr, "Learning rate");
  cmd->add_option("--seed-base", a.seed_base, "Split s uses seed seed_base + s");
  cmd->add_option("--splits", a.splits, "Number of random 50/25/25 splits");
  cmd->add_option("--lambdas", a.lambdas, "Lambda grid override, comma-separated (default 1e-5..1e5)");
  cmd->add_option("--ks", a.ks, "k grid override, comma-separated (default 10, 100, ..., n_train)");
  cmd->add_option("--jobs", a.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--label-column", a.label_column, "Name of the label column");
  cmd->add_option("--out", a.out, "Output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Close-k aggregate loss: data generators, training and benchmark harness"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.footer(
      "Precedence: a --config file overrides flags, and flags override defaults.\n"
      "Exit codes: 0 success, 2 usage, 3 I/O, 4 numerical divergence, 5 dataset validation.");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset");
  generate->add_option("name", gen.name, "example1, example2 or figure1")->required();
  generate->add_option("--scenario", gen.scenario, "figure1 scenario: easy, imbalance, imbalance_outlier, ambiguous");
  generate->add_option("--n", gen.n, "Points per cluster (example1), per class (example2) or in total (figure1)");
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--magnitude", gen.magnitude, "Outlier magnitude for example1");
  generate->add_option("--out", gen.out, "Output file")->required();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train one model and write its parameters and loss trace");
  train_cmd->add_option("--data", tr.data, "Dataset file")->required();
  train_cmd->add_option("--label-column", tr.label_column, "Name of the label column");
  train_cmd->add_option("--method", tr.method, "close, close_decay, atk, average or top");
  train_cmd->add_option("--k", tr.k, "k for close, atk and top");
  train_cmd->add_option("--k-star", tr.k_star, "Final k for close_decay");
  train_cmd->add_option("--loss", tr.loss, "logistic or hinge");
  train_cmd->add_option("--model", tr.model, "linear or residual_mlp");
  train_cmd->add_option("--epochs", tr.epochs, "Gradient steps");
  train_cmd->add_option("--lr", tr.lr, "Learning rate");
  train_cmd->add_option("--lambda", tr.lambda, "L2 weight (biases excluded)");
  train_cmd->add_option("--seed", tr.seed, "Model initialization seed");
  train_cmd->add_option("--split-seed", tr.split_seed,
                        "Train on a 50% split drawn with this seed and report test error on its 25% test part");
  train_cmd->add_flag("--standardize", tr.standardize, "Z-score features using the training view");
  train_cmd->add_option("--model-out", tr.model_out, "Model JSON output");
  train_cmd->add_option("--trace-out", tr.trace_out, "Per-epoch trace CSV (metadata goes to <file>.meta.json)");

  BenchArgs bench;
  ProtocolArgs bench_protocol;
  auto* bench_cmd = app.add_subcommand("bench", "Run the split protocol over every dataset in a manifest directory");
  bench_cmd->add_option("manifest", bench.manifest,
                        "Directory of .csv/.tsv datasets; a run.cfg inside is used when --config is absent")
      ->required();
  bench_cmd->add_flag("--resume", bench.resume, "Reuse outcomes stored in <out>/ledger.csv");
  add_protocol_flags(bench_cmd, bench_protocol);

  SimulateArgs sim;
  ProtocolArgs sim_protocol;
  sim_protocol.splits = 5;
  auto* simulate = app.add_subcommand("simulate", "Sweep a corruption level over a base dataset");
  simulate->add_option("base", sim.base, "Base dataset file")->required();
  simulate->add_option("corruption", sim.corruption, "outliers, imbalance or ambiguous")->required();
  simulate->add_option("--levels", sim.levels,
                       "Comma-separated levels: outlier/ambiguous fraction, or target majority fraction");
  simulate->add_flag("--corrupt-eval", sim.corrupt_eval, "Also apply imbalance/ambiguous to validation and test");
  add_protocol_flags(simulate, sim_protocol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::Usage);
  }

  try {
    if (*generate) return run_generate(gen);
    if (*train_cmd) return run_train(tr);
    if (*bench_cmd) return run_bench(bench, bench_protocol);
    if (*simulate) return run_simulate(sim, sim_protocol);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
