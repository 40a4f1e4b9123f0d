#include "kpi/report.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "kpi/errors.hpp"
#include "kpi/field_io.hpp"

namespace kpi {

namespace {

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          return q + "\"";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

// Doubles go through %.17g so JSON output is reproducible and exact.
nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v)) return nlohmann::ordered_json(format_double(v));
  return nlohmann::ordered_json::parse(format_double(v));
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return number(v);
        } else {
          return v;
        }
      },
      c);
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "bin") return OutputFormat::Binary;
  throw ConfigError("unknown output format '" + name + "' (expected csv, json or bin)");
}

std::string to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Binary: return "bin";
  }
  return "csv";
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw DimensionError("table " + name + " row has " + std::to_string(row.size()) +
                         " cells, expected " + std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

void write_table_json(std::ostream& out, const Table& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  nlohmann::ordered_json doc;
  doc["table"] = table.name;
  doc["columns"] = table.columns;
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void Summary::set(const std::string& key, Value value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries.emplace_back(key, std::move(value));
}

std::string Summary::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [key, value] : entries) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            doc[key] = number(v);
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (double x : v) arr.push_back(number(x));
            doc[key] = std::move(arr);
          } else {
            doc[key] = v;
          }
        },
        value);
  }
  return doc.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

OutputSink::OutputSink(std::filesystem::path root, OutputFormat format)
    : root_(std::move(root)), format_(format) {
  std::filesystem::create_directories(root_);
}

void OutputSink::record(const std::string& relative) {
  const auto path = root_ / relative;
  artifacts_.push_back({relative, sha256_file(path), std::filesystem::file_size(path)});
}

void OutputSink::write_text(const std::string& relative, const std::string& content) {
  const auto path = root_ / relative;
  std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
  }
  record(relative);
}

void OutputSink::write_binary(const std::string& relative,
                              const std::function<void(std::ostream&)>& writer) {
  const auto path = root_ / relative;
  std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    writer(out);
  }
  record(relative);
}

void OutputSink::write_table(const std::string& subdir, const Table& table) {
  std::ostringstream ss;
  const std::string prefix = subdir.empty() ? "" : subdir + "/";
  if (format_ == OutputFormat::Json) {
    write_table_json(ss, table);
    write_text(prefix + table.name + ".json", ss.str());
  } else {
    write_csv(ss, table);
    write_text(prefix + table.name + ".csv", ss.str());
  }
}

void OutputSink::write_summary(const std::string& subdir, const Summary& summary) {
  const std::string prefix = subdir.empty() ? "" : subdir + "/";
  write_text(prefix + "summary.json", summary.to_json());
}

std::filesystem::path output_root_from_env() {
  if (const char* env = std::getenv("KPI_OUTPUT_ROOT"); env && *env) return env;
  return "kpi-out";
}

}  // namespace kpi
