#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace semirev::cli {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Flat INI-style configuration: [section] lines followed by key = value
// pairs, '#' comments, case-sensitive keys.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_str(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  double get_num(const std::string& section, const std::string& key,
                 double fallback) const;
  int get_int(const std::string& section, const std::string& key,
              int fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  // comma-separated numbers; entries may be plain or fractions like 1/40
  std::vector<double> get_list(const std::string& section,
                               const std::string& key,
                               const std::vector<double>& fallback) const;

  // FNV-1a of the raw config text
  std::string hash() const;

  const std::string& raw() const { return raw_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string raw_;
};

// parses a single number, accepting a/b fractions
double parse_number(const std::string& token);

// shortest round-trip decimal representation
std::string format_double(double v);

uint64_t fnv1a(const std::string& s);

}  // namespace semirev::cli
