#include "closek/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "closek/errors.hpp"
#include "closek/format.hpp"

namespace closek {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ArgumentError("'" + text + "' is not a finite number");
  }
  return value;
}

std::size_t parse_size(const std::string& text) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ArgumentError("'" + text + "' is not a non-negative integer");
  }
  return value;
}

template <class T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += ',';
    if constexpr (std::is_same_v<T, double>) {
      out += format_double(item);
    } else if constexpr (std::is_same_v<T, std::size_t>) {
      out += std::to_string(item);
    } else {
      out += to_string(item);
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ArgumentError("empty entry in list '" + text + "'");
    out.push_back(item);
  }
  if (out.empty()) throw ArgumentError("empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_double(item));
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) out.push_back(parse_size(item));
  return out;
}

void RunConfig::validate() const {
  if (families.empty()) throw ArgumentError("no model family selected");
  if (losses.empty()) throw ArgumentError("no loss kind selected");
  protocol.validate();
}

ProtocolConfig RunConfig::for_pair(ModelFamily family, LossKind loss) const {
  ProtocolConfig p = protocol;
  p.family = family;
  p.loss = loss;
  return p;
}

std::string RunConfig::fingerprint() const {
  std::ostringstream out;
  out << "model_family=" << join(families) << ";loss_kind=" << join(losses)
      << ";methods=" << join(protocol.methods) << ";epochs=" << protocol.epochs
      << ";learning_rate=" << format_double(protocol.learning_rate)
      << ";seed_base=" << protocol.seed_base << ";split_count=" << protocol.split_count
      << ";lambdas=" << (protocol.lambdas ? join(*protocol.lambdas) : "standard")
      << ";ks=" << (protocol.ks ? join(*protocol.ks) : "standard");
  return out.str();
}

void apply_config_text(std::istream& in, RunConfig& config, const std::string& source) {
  RunConfig next = config;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ArgumentError(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ArgumentError(where + "key '" + key + "' repeated");
    try {
      if (key == "model_family") {
        next.families.clear();
        for (const auto& s : split_list(value)) next.families.push_back(parse_model_family(s));
      } else if (key == "loss_kind") {
        next.losses.clear();
        for (const auto& s : split_list(value)) next.losses.push_back(parse_loss_kind(s));
      } else if (key == "methods") {
        next.protocol.methods.clear();
        for (const auto& s : split_list(value)) next.protocol.methods.push_back(parse_method(s));
      } else if (key == "epochs") {
        next.protocol.epochs = parse_size(value);
      } else if (key == "learning_rate") {
        next.protocol.learning_rate = parse_double(value);
      } else if (key == "seed_base") {
        next.protocol.seed_base = parse_size(value);
      } else if (key == "split_count") {
        next.protocol.split_count = parse_size(value);
      } else if (key == "lambdas") {
        next.protocol.lambdas = parse_double_list(value);
      } else if (key == "ks") {
        next.protocol.ks = parse_size_list(value);
      } else {
        throw ArgumentError("unknown key '" + key + "'");
      }
    } catch (const ArgumentError& e) {
      const std::string what = e.what();
      throw ArgumentError(what.rfind(where, 0) == 0 ? what : where + what);
    }
  }
  try {
    next.validate();
  } catch (const ArgumentError& e) {
    throw ArgumentError(source + ": " + e.what());
  }
  config = std::move(next);
}

void apply_config_file(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  apply_config_text(in, config, path.string());
}

}  // namespace closek
