#pragma once

// Tabular results, summaries and the output directory with its manifest.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace kpi {

enum class OutputFormat { Csv, Json, Binary };

OutputFormat parse_format(const std::string& name);
std::string to_string(OutputFormat format);

using Cell = std::variant<long long, double, std::string, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

void write_csv(std::ostream& out, const Table& table);
void write_table_json(std::ostream& out, const Table& table);

/// Flat ordered key/value summary; values may also be numeric lists.
struct Summary {
  using Value = std::variant<long long, double, std::string, bool, std::vector<double>>;
  std::vector<std::pair<std::string, Value>> entries;

  void set(const std::string& key, Value value);
  std::string to_json() const;
};

/// Hex SHA-256 of a byte string / file.
std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct Artifact {
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Directory that records every file it writes.
class OutputSink {
public:
  OutputSink(std::filesystem::path root, OutputFormat format);

  const std::filesystem::path& root() const noexcept { return root_; }
  OutputFormat format() const noexcept { return format_; }

  /// Writes a table as <name>.csv or <name>.json depending on the format;
  /// the binary format keeps tables in CSV.
  void write_table(const std::string& subdir, const Table& table);
  void write_summary(const std::string& subdir, const Summary& summary);
  void write_text(const std::string& relative, const std::string& content);
  void write_binary(const std::string& relative,
                    const std::function<void(std::ostream&)>& writer);

  const std::vector<Artifact>& artifacts() const noexcept { return artifacts_; }

private:
  void record(const std::string& relative);

  std::filesystem::path root_;
  OutputFormat format_;
  std::vector<Artifact> artifacts_;
};

/// Output root: $KPI_OUTPUT_ROOT when set, else ./kpi-out.
std::filesystem::path output_root_from_env();

}  // namespace kpi
