#include "closek/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "closek/errors.hpp"
#include "closek/format.hpp"

namespace closek {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  auto out = open_for_write(path);
  fn(out);
  finish(out, path);
}

constexpr const char* kLedgerColumns =
    "dataset,family,loss,method,split,test_accuracy,valid_accuracy,train_accuracy,selected_lambda,"
    "selected_k,n_train,diverged";

}  // namespace

void write_matrix_csv(std::ostream& out, const ComparisonMatrix& matrix) {
  out << "family,loss,kind,row_method";
  for (Method m : kAllMethods) out << ',' << to_string(m);
  out << '\n';
  for (const auto& block : matrix.blocks) {
    for (const char* kind : {"significant", "improved"}) {
      const auto& cells = std::string_view(kind) == "significant" ? block.significant : block.improved;
      for (std::size_t i = 0; i < block.methods.size(); ++i) {
        out << to_string(block.family) << ',' << to_string(block.loss) << ',' << kind << ','
            << to_string(block.methods[i]);
        for (Method col : kAllMethods) {
          out << ',';
          for (std::size_t j = 0; j < block.methods.size(); ++j) {
            if (block.methods[j] == col && cells[i][j]) out << format_double(*cells[i][j]);
          }
        }
        out << '\n';
      }
    }
  }
}

void write_per_dataset_csv(std::ostream& out, const std::vector<ProtocolResult>& results) {
  out << "dataset,family,loss,method,split,test_accuracy,selected_lambda,selected_k,valid_accuracy,"
         "n_train,diverged\n";
  for (const auto& r : results) {
    for (const auto& mr : r.methods) {
      for (const auto& s : mr.splits) {
        out << r.dataset << ',' << to_string(r.family) << ',' << to_string(r.loss) << ','
            << to_string(mr.method) << ',' << s.split << ',' << format_double(s.test_accuracy) << ','
            << format_double(s.selected_lambda) << ',';
        if (uses_k(mr.method)) out << s.selected_k;
        out << ',' << format_double(s.valid_accuracy) << ',' << s.n_train << ',' << s.diverged << '\n';
      }
    }
  }
}

void write_kstar_csv(std::ostream& out, const std::vector<KStarRow>& rows) {
  out << "dataset,family,loss,k_ratio,delta_accuracy\n";
  for (const auto& row : rows) {
    out << row.dataset << ',' << to_string(row.family) << ',' << to_string(row.loss) << ','
        << format_double(row.k_ratio) << ',' << format_double(row.delta) << '\n';
  }
}

void write_error_table_csv(std::ostream& out, const std::vector<ProtocolResult>& results) {
  out << "dataset,family,loss,method,mean_test_error_pct\n";
  for (const auto& r : results) {
    for (const auto& mr : r.methods) {
      out << r.dataset << ',' << to_string(r.family) << ',' << to_string(r.loss) << ','
          << to_string(mr.method) << ',' << format_double(100.0 * (1.0 - mr.mean_test_accuracy())) << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, Corruption corruption, const std::vector<SweepRow>& rows) {
  out << "corruption,level,method,mean_test_accuracy,majority_baseline,mean_train_accuracy\n";
  for (const auto& row : rows) {
    out << to_string(corruption) << ',' << format_double(row.level) << ',' << to_string(row.method) << ','
        << format_double(row.mean_test_accuracy) << ',' << format_double(row.majority_baseline) << ','
        << format_double(row.mean_train_accuracy) << '\n';
  }
}

void write_schema(std::ostream& out) {
  out << R"(matrix.csv
  family              linear | residual_mlp
  loss                logistic | hinge
  kind                significant: fraction of datasets where the column method beats the
                        row method with a two-sided paired t-test p <= 0.05 and a positive
                        mean difference
                      improved: fraction of datasets where the column method's mean test
                        accuracy exceeds the row method's by at least 0.02
  row_method          method i
  close..top          fraction for (row i, column j); empty on the diagonal and for methods
                        not run on every dataset of the block

per_dataset.csv
  dataset             dataset name (file stem)
  family, loss        as above
  method              close | close_decay | atk | average | top
  split               split index; the split seed is seed_base + split
  test_accuracy       accuracy of the selected model on the test view
  selected_lambda     L2 weight chosen on validation
  selected_k          k (k* for close_decay) chosen on validation; empty for average
  valid_accuracy      validation accuracy of the selected model
  n_train             training view size
  diverged            grid points skipped because training diverged

kstar.csv
  dataset, family, loss
  k_ratio             mean over splits of selected k* / n_train for close_decay
  delta_accuracy      mean test accuracy of close_decay minus that of average

error_table.csv
  dataset, family, loss, method
  mean_test_error_pct 100 * (1 - mean test accuracy over splits)

sweep_<corruption>.csv
  corruption          outliers | imbalance | ambiguous
  level               outlier or ambiguous fraction, or target majority fraction
  method              as above
  mean_test_accuracy  mean over splits
  majority_baseline   mean over splits of the majority-class fraction of the test labels
  mean_train_accuracy mean over splits, measured on the corrupted training view
)";
}

void write_bench_outputs(const std::filesystem::path& dir, const std::vector<ProtocolResult>& results) {
  ensure_dir(dir);
  write_file(dir / "matrix.csv", [&](std::ostream& o) { write_matrix_csv(o, build_matrix(results)); });
  write_file(dir / "per_dataset.csv", [&](std::ostream& o) { write_per_dataset_csv(o, results); });
  write_file(dir / "kstar.csv", [&](std::ostream& o) { write_kstar_csv(o, k_star_summary(results)); });
  write_file(dir / "error_table.csv", [&](std::ostream& o) { write_error_table_csv(o, results); });
  write_file(dir / "schema.txt", [&](std::ostream& o) { write_schema(o); });
}

void write_sweep_outputs(const std::filesystem::path& dir, Corruption corruption,
                         const std::vector<SweepRow>& rows) {
  ensure_dir(dir);
  const auto name = "sweep_" + std::string(to_string(corruption)) + ".csv";
  write_file(dir / name, [&](std::ostream& o) { write_sweep_csv(o, corruption, rows); });
  write_file(dir / "schema.txt", [&](std::ostream& o) { write_schema(o); });
}

ResumeLedger::ResumeLedger(std::filesystem::path path, const std::string& fingerprint, bool resume)
    : path_(std::move(path)) {
  const std::string header = "# config " + fingerprint;
  if (resume && std::filesystem::exists(path_)) {
    std::ifstream in(path_);
    if (!in) throw IoError("cannot read ledger '" + path_.string() + "'");
    std::string line;
    std::getline(in, line);
    if (line != header) {
      throw ArgumentError("ledger '" + path_.string() + "' was written under a different configuration");
    }
    std::getline(in, line);  // column names
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      // A torn final line from an interrupted run is ignored.
      if (cells.size() != 12) continue;
      try {
        SplitOutcome s;
        s.split = std::stoul(cells[4]);
        s.test_accuracy = std::stod(cells[5]);
        s.valid_accuracy = std::stod(cells[6]);
        s.train_accuracy = std::stod(cells[7]);
        s.selected_lambda = std::stod(cells[8]);
        s.selected_k = std::stoul(cells[9]);
        s.n_train = std::stoul(cells[10]);
        s.diverged = std::stoul(cells[11]);
        entries_[{cells[0], parse_model_family(cells[1]), parse_loss_kind(cells[2]), s.split,
                  parse_method(cells[3])}] = s;
      } catch (const std::exception&) {
        continue;
      }
    }
    return;
  }
  std::ofstream out(path_, std::ios::trunc);
  if (!out) throw IoError("cannot write ledger '" + path_.string() + "'");
  out << header << '\n' << kLedgerColumns << '\n';
  finish(out, path_);
}

std::optional<SplitOutcome> ResumeLedger::lookup(const std::string& dataset, ModelFamily family,
                                                 LossKind loss, std::size_t split, Method method) const {
  const auto it = entries_.find({dataset, family, loss, split, method});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResumeLedger::record(const std::string& dataset, ModelFamily family, LossKind loss, Method method,
                          const SplitOutcome& s) {
  entries_[{dataset, family, loss, s.split, method}] = s;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to ledger '" + path_.string() + "'");
  out << dataset << ',' << to_string(family) << ',' << to_string(loss) << ',' << to_string(method) << ','
      << s.split << ',' << format_double(s.test_accuracy) << ',' << format_double(s.valid_accuracy) << ','
      << format_double(s.train_accuracy) << ',' << format_double(s.selected_lambda) << ',' << s.selected_k
      << ',' << s.n_train << ',' << s.diverged << '\n';
  finish(out, path_);
}

}  // namespace closek
