#include "kpi/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "kpi/errors.hpp"

namespace kpi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

double parse_double(const std::string& text, const std::string& key, int line) {
  const std::string t = trim(text);
  if (t == "pi") return 3.14159265358979323846;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError("key '" + key + "' expects a number, got '" + t + "'", line);
  }
  return v;
}

}  // namespace

void Section::set(const std::string& key, const std::string& value, int line) {
  if (values_.count(key)) {
    throw ConfigError("duplicate key '" + key + "' in section [" + name_ + "]", line);
  }
  values_[key] = {value, line};
  order_.push_back(key);
}

bool Section::has(const std::string& key) const { return values_.count(key) > 0; }

int Section::line_of(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? line_ : it->second.line;
}

std::vector<std::string> Section::keys() const { return order_; }

std::string Section::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError("section [" + name_ + "] is missing required key '" + key + "'", line_);
  }
  return it->second.value;
}

std::string Section::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Section::get_double(const std::string& key) const {
  return parse_double(get_string(key), key, line_of(key));
}

double Section::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Section::get_int(const std::string& key) const {
  const std::string t = trim(get_string(key));
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ConfigError("key '" + key + "' expects an integer, got '" + t + "'", line_of(key));
  }
  return v;
}

long Section::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Section::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string t = trim(get_string(key));
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  throw ConfigError("key '" + key + "' expects true or false, got '" + t + "'", line_of(key));
}

std::vector<double> Section::get_doubles(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, key, line_of(key)));
  if (out.empty()) throw ConfigError("key '" + key + "' expects a list of numbers", line_of(key));
  return out;
}

std::vector<double> Section::get_doubles(const std::string& key,
                                         std::vector<double> fallback) const {
  return has(key) ? get_doubles(key) : fallback;
}

void Section::require_only(const std::vector<std::string>& allowed) const {
  for (const std::string& key : order_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in section [" + name_ + "]", line_of(key));
    }
  }
}

Config parse_config(const std::string& text) {
  Config cfg;
  cfg.global = Section("global", 0);
  Section* current = nullptr;
  std::set<std::string> names;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find_first_of("#;");
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (!valid_name(name)) {
        throw ConfigError("invalid section name '" + name + "'", line);
      }
      if (!names.insert(name).second) {
        throw ConfigError("duplicate section [" + name + "]", line);
      }
      if (name == "global") {
        cfg.global = Section("global", line);
        current = &cfg.global;
      } else {
        cfg.experiments.emplace_back(name, line);
        current = &cfg.experiments.back();
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value', got '" + s + "'", line);
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError("invalid key '" + key + "'", line);
    if (!current) throw ConfigError("key '" + key + "' appears before any section", line);
    current->set(key, value, line);
  }
  cfg.global.require_only({"seed", "threads", "format"});
  for (const Section& sec : cfg.experiments) {
    if (!sec.has("kind")) {
      throw ConfigError("section [" + sec.name() + "] has no 'kind'", sec.line());
    }
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace kpi
