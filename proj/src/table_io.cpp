#include "closek/table_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

#include "closek/errors.hpp"
#include "closek/format.hpp"

namespace closek {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line, char delimiter) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\r' || c == '\t'; });
}

}  // namespace

LabeledDataset parse_table(std::istream& in, const std::string& name,
                           const std::string& label_column) {
  std::string header_line;
  while (std::getline(in, header_line) && blank(header_line)) {
  }
  if (header_line.empty() || blank(header_line)) {
    throw DatasetError(DatasetProblem::EmptyFile, "'" + name + "' is empty");
  }
  const char delimiter = header_line.find('\t') != std::string::npos ? '\t' : ',';
  const auto header = split(header_line, delimiter);

  std::set<std::string> seen;
  for (const auto& column : header) {
    if (!seen.insert(column).second) {
      throw DatasetError(DatasetProblem::DuplicateHeader,
                         "'" + name + "' repeats header column '" + column + "'");
    }
  }
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw DatasetError(DatasetProblem::MissingLabelColumn,
                       "'" + name + "' has no label column '" + label_column + "'");
  }
  const std::size_t label_index = static_cast<std::size_t>(label_it - header.begin());

  LabeledDataset data;
  data.name = name;
  data.features = Matrix(0, header.size() - 1);
  std::vector<std::string> raw_labels;
  std::vector<double> row(header.size() - 1);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split(line, delimiter);
    if (cells.size() != header.size()) {
      throw DatasetError(DatasetProblem::RaggedRow, "'" + name + "' line " + std::to_string(line_no) +
                                                        " has " + std::to_string(cells.size()) +
                                                        " cells, expected " + std::to_string(header.size()));
    }
    std::size_t f = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_index) continue;
      const auto value = parse_number(cells[c]);
      if (!value) {
        throw DatasetError(DatasetProblem::NonNumericFeature,
                           "'" + name + "' line " + std::to_string(line_no) + " column '" + header[c] +
                               "' is not numeric: '" + cells[c] + "'");
      }
      row[f++] = *value;
    }
    data.features.append_row(row);
    raw_labels.push_back(cells[label_index]);
  }
  if (raw_labels.empty()) {
    throw DatasetError(DatasetProblem::EmptyFile, "'" + name + "' has a header but no rows");
  }

  std::vector<std::string> classes(raw_labels.begin(), raw_labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() != 2) {
    throw DatasetError(DatasetProblem::LabelClassCount,
                       "'" + name + "' label column has " + std::to_string(classes.size()) +
                           " distinct values, expected 2");
  }
  std::string positive = classes[1];
  const auto a = parse_number(classes[0]);
  const auto b = parse_number(classes[1]);
  if (a && b) positive = *a > *b ? classes[0] : classes[1];

  data.labels.reserve(raw_labels.size());
  for (const auto& raw : raw_labels) data.labels.push_back(raw == positive ? 1 : -1);
  data.validate();
  return data;
}

LabeledDataset load_table(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_table(in, path.stem().string(), label_column);
}

void write_table(std::ostream& out, const LabeledDataset& data, char delimiter) {
  for (std::size_t j = 0; j < data.dim(); ++j) out << 'f' << j << delimiter;
  out << "target\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.features.row(i)) out << format_double(v) << delimiter;
    out << data.labels[i] << '\n';
  }
}

void write_table(const std::filesystem::path& path, const LabeledDataset& data, char delimiter) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_table(out, data, delimiter);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace closek
