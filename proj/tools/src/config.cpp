#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qpm::cli {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

double to_number(const std::string& text, const std::string& context) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    fail(context + ": cannot parse number '" + text + "'");
  }
  if (pos != text.size()) fail(context + ": trailing characters in number '" + text + "'");
  return v;
}

}  // namespace

std::vector<std::string> split_tokens(const std::string& value) {
  std::vector<std::string> tokens;
  std::istringstream in(value);
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

double parse_quantity(const std::string& text, Dimension dim, const std::string& context) {
  const auto tokens = split_tokens(text);
  if (tokens.empty()) fail(context + ": empty value");
  if (tokens.size() > 2) fail(context + ": expected '<number> [unit]', got '" + text + "'");
  const double number = to_number(tokens[0], context);
  const std::string unit = tokens.size() == 2 ? tokens[1] : "";

  auto unit_scale = [&](std::initializer_list<std::pair<const char*, double>> table) {
    if (unit.empty()) fail(context + ": missing unit (e.g. '" + table.begin()->first + "')");
    for (const auto& [name, scale] : table) {
      if (unit == name) return scale;
    }
    fail(context + ": unknown unit '" + unit + "'");
  };

  switch (dim) {
    case Dimension::Scalar:
      if (!unit.empty()) fail(context + ": dimensionless value must not carry a unit");
      return number;
    case Dimension::Length:
      return number * unit_scale({{"m", 1.0},
                                  {"mm", 1e-3},
                                  {"um", 1e-6},
                                  {"µm", 1e-6},  // µm
                                  {"nm", 1e-9}});
    case Dimension::Frequency:
      return number * unit_scale({{"rad/s", 1.0}});
    case Dimension::Wavenumber:
      return number * unit_scale({{"rad/m", 1.0}});
    case Dimension::Slope:
      return number * unit_scale({{"s/m", 1.0}});
  }
  fail(context + ": unhandled dimension");
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config: cannot open " + path);
  return from_stream(in, path);
}

Config Config::from_stream(std::istream& in, const std::string& name) {
  Config config;
  config.name_ = name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail("config " + name + ": line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail("config " + name + ": line " + std::to_string(line_no) + ": empty key");
    if (value.empty()) {
      fail("config " + name + ": line " + std::to_string(line_no) + ": empty value for '" + key +
           "'");
    }
    if (!config.values_.emplace(key, value).second) {
      fail("config " + name + ": line " + std::to_string(line_no) + ": duplicate key '" + key +
           "'");
    }
  }
  return config;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::raw(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end()) fail("config " + name_ + ": missing key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

std::string Config::get_string(const std::string& key) { return raw(key); }

std::string Config::get_string_or(const std::string& key, const std::string& fallback) {
  return has(key) ? raw(key) : fallback;
}

double Config::get_number(const std::string& key) {
  return parse_quantity(raw(key), Dimension::Scalar, "config key '" + key + "'");
}

double Config::get_number_or(const std::string& key, double fallback) {
  return has(key) ? get_number(key) : fallback;
}

long Config::get_int(const std::string& key) {
  const double v = get_number(key);
  const long n = static_cast<long>(v);
  if (static_cast<double>(n) != v) fail("config key '" + key + "': expected an integer");
  return n;
}

long Config::get_int_or(const std::string& key, long fallback) {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool_or(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  std::string v = raw(key);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail("config key '" + key + "': expected true/false");
}

double Config::get_length(const std::string& key) {
  return parse_quantity(raw(key), Dimension::Length, "config key '" + key + "'");
}

double Config::get_length_or(const std::string& key, double fallback) {
  return has(key) ? get_length(key) : fallback;
}

double Config::get_frequency(const std::string& key) {
  return parse_quantity(raw(key), Dimension::Frequency, "config key '" + key + "'");
}

double Config::get_frequency_or(const std::string& key, double fallback) {
  return has(key) ? get_frequency(key) : fallback;
}

double Config::get_wavenumber_or(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return parse_quantity(raw(key), Dimension::Wavenumber, "config key '" + key + "'");
}

double Config::get_slope(const std::string& key) {
  return parse_quantity(raw(key), Dimension::Slope, "config key '" + key + "'");
}

void Config::finish() const {
  std::string leftovers;
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) leftovers += (leftovers.empty() ? "" : ", ") + key;
  }
  if (!leftovers.empty()) {
    fail("config " + name_ + ": unrecognized keys for this subcommand: " + leftovers);
  }
}

}  // namespace qpm::cli
