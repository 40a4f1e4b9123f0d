#pragma once

// Experiment engines and the config-driven runner. Every engine reads its
// parameters from a config Section, writes tables into an OutputSink
// subdirectory and returns a summary. Given the same section and seed the
// tables are byte-identical.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kpi/config.hpp"
#include "kpi/control_profile.hpp"
#include "kpi/random_fields.hpp"
#include "kpi/report.hpp"

namespace kpi {

struct ScanOptions {
  double h = 1.0 / 64.0;
  int n_first = -2;
  int n_last = 4;
  double epsilon0 = 1.0;
  double T = 1.0;
  int trials = 16;
  double alpha = 2.0;
  /// Regime boundary: n <= -N0 high, |n| < N0 critical, n >= N0 low.
  int N0 = 1;
  Interval support{kPi / 4.0, 3.0 * kPi / 4.0};
  ProfileKind kind = ProfileKind::SmoothExp;
};

struct ScanRow {
  int n = 0;
  std::string regime;
  int modes = 0;
  /// Largest ||psi_n u0||^2 / \int ||g S(t) psi_n u0||^2 over random trials.
  double trial_max = 0.0;
  /// 1 / lambda_min of the block Gramian (the sharp constant), 0 if skipped.
  double sharp = 0.0;
};

/// Frequency-localized observability of the reduced equation with
/// lambda = h^{-(alpha+2)/2}, observed through multiplication by g.
std::vector<ScanRow> frequency_localized_scan(const ScanOptions& options, Rng& rng);

struct WeakOptions {
  std::vector<double> hs{1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0};
  double T = 1.0;
  int trials = 32;
  double alpha = 2.0;
  /// Data live on |h k| <= xi_max.
  double xi_max = 2.0;
  Interval support{kPi / 4.0, 3.0 * kPi / 4.0};
  ProfileKind kind = ProfileKind::SmoothExp;
};

struct WeakRow {
  double h = 0.0;
  int K = 0;
  int trials = 0;
  /// max over trials of ||u0||^2 / (\int\int |g u|^2 + ||u0||_{-1}^2).
  double c_max = 0.0;
  double c_mean = 0.0;
};

/// Empirical constant of the weak observability inequality per h.
std::vector<WeakRow> weak_observability_diagnostic(const WeakOptions& options, Rng& rng);

/// Smallest C with ||u0||^2 <= C (A + R) for one datum: ||u0||^2 / (A + R).
double weak_constant(double norm2, double observed, double remainder);

/// Names accepted as `kind`.
const std::vector<std::string>& experiment_kinds();

/// Runs one section; `subdir` is relative to the sink root.
Summary run_section(const Section& section, OutputSink& sink, const std::string& subdir,
                    std::uint64_t seed);

struct RunOptions {
  std::filesystem::path root;
  OutputFormat format = OutputFormat::Csv;
  std::uint64_t seed = 0;
  /// Overrides [global] seed when set.
  bool seed_overridden = false;
  unsigned threads = 0;
};

struct RunRecord {
  std::string name;
  std::string kind;
  std::string status;
  double seconds = 0.0;
};

/// Runs every section of a config text, writing <root>/<section>/... and
/// <root>/manifest.json (config hash, versions, timings, file hashes).
std::vector<RunRecord> run_experiment(const std::string& config_text, const RunOptions& options);

/// Library and dependency versions recorded in manifests.
std::vector<std::pair<std::string, std::string>> library_versions();

}  // namespace kpi
