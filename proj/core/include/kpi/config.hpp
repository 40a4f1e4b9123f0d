#pragma once

// Plain-text experiment configuration: one experiment per section.
//
//   # comment
//   [global]
//   seed = 7
//
//   [half-dichotomy]
//   kind = dichotomy
//   alpha = 0.5
//
// Keys are unique within a section. Every error names its 1-based line.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kpi {

class Section {
public:
  Section() = default;
  Section(std::string name, int line) : name_(std::move(name)), line_(line) {}

  const std::string& name() const noexcept { return name_; }
  int line() const noexcept { return line_; }

  void set(const std::string& key, const std::string& value, int line = 0);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;

  /// Line of a key, or of the section header when absent.
  int line_of(const std::string& key) const;
  /// Throws ConfigError for any key not in `allowed`.
  void require_only(const std::vector<std::string>& allowed) const;
  /// Keys in file order.
  std::vector<std::string> keys() const;

private:
  struct Entry {
    std::string value;
    int line;
  };
  std::string name_;
  int line_ = 0;
  std::map<std::string, Entry> values_;
  std::vector<std::string> order_;
};

struct Config {
  /// The optional [global] section (empty when absent).
  Section global;
  std::vector<Section> experiments;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

}  // namespace kpi
