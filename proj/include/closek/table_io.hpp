#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "closek/dataset.hpp"

namespace closek {

/// Reads a comma- or tab-delimited table with a header row. The delimiter is
/// taken from the header line (tab if present, comma otherwise). The label
/// column must hold exactly two distinct values; the larger one maps to +1
/// (numeric order when both parse as numbers, lexicographic otherwise).
/// All other columns become features in header order.
LabeledDataset load_table(const std::filesystem::path& path,
                          const std::string& label_column = "target");

LabeledDataset parse_table(std::istream& in, const std::string& name,
                           const std::string& label_column = "target");

/// Writes header f0..f{d-1},target and one row per example, labels as -1/1.
void write_table(std::ostream& out, const LabeledDataset& data, char delimiter = ',');
void write_table(const std::filesystem::path& path, const LabeledDataset& data,
                 char delimiter = ',');

}  // namespace closek
