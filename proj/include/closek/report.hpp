#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "closek/harness.hpp"

namespace closek {

// CSV writers for harness output. Columns are listed by write_schema.
void write_matrix_csv(std::ostream& out, const ComparisonMatrix& matrix);
void write_per_dataset_csv(std::ostream& out, const std::vector<ProtocolResult>& results);
void write_kstar_csv(std::ostream& out, const std::vector<KStarRow>& rows);
void write_error_table_csv(std::ostream& out, const std::vector<ProtocolResult>& results);
void write_sweep_csv(std::ostream& out, Corruption corruption, const std::vector<SweepRow>& rows);
void write_schema(std::ostream& out);

/// Writes matrix.csv, per_dataset.csv, kstar.csv, error_table.csv and
/// schema.txt into `dir`, creating it if needed.
void write_bench_outputs(const std::filesystem::path& dir, const std::vector<ProtocolResult>& results);

/// Writes sweep_<corruption>.csv and schema.txt into `dir`.
void write_sweep_outputs(const std::filesystem::path& dir, Corruption corruption,
                         const std::vector<SweepRow>& rows);

/// Append-only record of finished (dataset, family, loss, split, method)
/// outcomes, used by `bench --resume`. The first line stores the run-config
/// fingerprint; resuming under a different configuration is refused.
class ResumeLedger {
 public:
  /// Opens `path`. With `resume`, previously stored outcomes are loaded;
  /// otherwise the file is truncated.
  ResumeLedger(std::filesystem::path path, const std::string& fingerprint, bool resume);

  std::optional<SplitOutcome> lookup(const std::string& dataset, ModelFamily family, LossKind loss,
                                     std::size_t split, Method method) const;
  void record(const std::string& dataset, ModelFamily family, LossKind loss, Method method,
              const SplitOutcome& outcome);

  std::size_t size() const noexcept { return entries_.size(); }

 private:
  using Key = std::tuple<std::string, ModelFamily, LossKind, std::size_t, Method>;
  std::filesystem::path path_;
  std::map<Key, SplitOutcome> entries_;
};

}  // namespace closek
