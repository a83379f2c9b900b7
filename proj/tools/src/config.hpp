#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace qpm::cli {

/// Flat `key = value` configuration file. '#' starts a comment, blank lines
/// are skipped, keys are unique. Physical quantities are written as
/// "<number> <unit>" with an explicit unit suffix; dimensionless values are
/// bare numbers. Every key must be consumed by the subcommand that loaded the
/// file; leftovers are reported as errors (typo protection).
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_stream(std::istream& in, const std::string& name);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string_or(const std::string& key, const std::string& fallback);

  double get_number(const std::string& key);
  double get_number_or(const std::string& key, double fallback);
  long get_int(const std::string& key);
  long get_int_or(const std::string& key, long fallback);
  bool get_bool_or(const std::string& key, bool fallback);

  // Quantities with units: m/mm/um/µm/nm, rad/s, rad/m, s/m.
  double get_length(const std::string& key);
  double get_length_or(const std::string& key, double fallback);
  double get_frequency(const std::string& key);
  double get_frequency_or(const std::string& key, double fallback);
  double get_wavenumber_or(const std::string& key, double fallback);
  double get_slope(const std::string& key);

  /// Throws listing any keys never consumed.
  void finish() const;

  const std::string& name() const { return name_; }

 private:
  std::string raw(const std::string& key);

  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
  std::string name_;
};

/// Splits a raw config value on whitespace (for multi-token values such as
/// crystal references).
std::vector<std::string> split_tokens(const std::string& value);

enum class Dimension { Scalar, Length, Frequency, Wavenumber, Slope };

/// "<number> [unit]" -> SI value; the unit must match the dimension.
double parse_quantity(const std::string& text, Dimension dim, const std::string& context);

}  // namespace qpm::cli
