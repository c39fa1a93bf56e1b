#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "closek/harness.hpp"

namespace closek {

/// Settings for a bench run. `families` x `losses` are each run through the
/// protocol described by `protocol` (whose family/loss fields are ignored).
struct RunConfig {
  std::vector<ModelFamily> families{ModelFamily::Linear};
  std::vector<LossKind> losses{LossKind::Logistic};
  ProtocolConfig protocol;

  void validate() const;

  /// The protocol for one (family, loss) pair.
  ProtocolConfig for_pair(ModelFamily family, LossKind loss) const;

  /// Canonical text of every result-affecting setting. `jobs` is excluded.
  std::string fingerprint() const;
};

/// Applies `key = value` lines on top of `config`. Blank lines and text after
/// '#' are ignored. Keys: model_family, loss_kind, methods, epochs,
/// learning_rate, seed_base, split_count, lambdas, ks. List values are
/// comma-separated. Unknown keys, repeated keys and invalid values throw
/// ArgumentError naming the line.
void apply_config_text(std::istream& in, RunConfig& config, const std::string& source = "config");
void apply_config_file(const std::filesystem::path& path, RunConfig& config);

/// Comma-separated helpers shared with the CLI.
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);
std::vector<std::string> split_list(const std::string& text);

}  // namespace closek
