#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kpi/errors.hpp"
#include "kpi/experiments.hpp"
#include "kpi/field_io.hpp"

using namespace kpi;
namespace fs = std::filesystem;

namespace {

fs::path fresh_root(const std::string& name) {
  const fs::path root = fs::temp_directory_path() / ("kpi_exp_" + name);
  fs::remove_all(root);
  return root;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  int n = -1;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST(FrequencyScan, FiniteAcrossRegimes) {
  ScanOptions o;
  o.trials = 4;
  Rng rng(1);
  const auto rows = frequency_localized_scan(o, rng);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows.front().regime, "high");
  EXPECT_EQ(rows[2].regime, "critical");
  EXPECT_EQ(rows.back().regime, "low");
  for (const ScanRow& r : rows) {
    EXPECT_GT(r.modes, 0);
    EXPECT_TRUE(std::isfinite(r.trial_max));
    EXPECT_GT(r.trial_max, 0.0);
    if (r.sharp > 0.0) EXPECT_LE(r.trial_max, r.sharp * (1 + 1e-9));
  }
}

TEST(FrequencyScan, RegimeConstraint) {
  ScanOptions o;
  o.n_last = 7;  // 2^7 / 64 = 2 > epsilon0
  Rng rng(2);
  EXPECT_THROW(frequency_localized_scan(o, rng), ParameterError);
}

TEST(WeakObservability, ConstantDefinitionAndBoundedness) {
  EXPECT_DOUBLE_EQ(weak_constant(2.0, 1.0, 1.0), 1.0);
  EXPECT_THROW(weak_constant(1.0, 0.0, 0.0), DomainError);
  WeakOptions o;
  o.trials = 4;
  o.hs = {1.0 / 16.0, 1.0 / 32.0};
  Rng rng(3);
  const auto rows = weak_observability_diagnostic(o, rng);
  ASSERT_EQ(rows.size(), 2u);
  for (const WeakRow& r : rows) {
    EXPECT_GT(r.c_max, 0.0);
    EXPECT_LE(r.c_mean, r.c_max);
    EXPECT_TRUE(std::isfinite(r.c_max));
  }
}

TEST(RunExperiment, EmptyConfigWritesManifestOnly) {
  RunOptions o;
  o.root = fresh_root("empty");
  EXPECT_TRUE(run_experiment("# nothing\n", o).empty());
  EXPECT_TRUE(fs::exists(o.root / "manifest.json"));
  const auto j = nlohmann::json::parse(slurp(o.root / "manifest.json"));
  EXPECT_TRUE(j["experiments"].empty());
  EXPECT_TRUE(j["files"].empty());
  EXPECT_EQ(j["config_sha256"], sha256_hex("# nothing\n"));
}

TEST(RunExperiment, DichotomyRowsAndManifest) {
  RunOptions o;
  o.root = fresh_root("dich");
  const std::string cfg = "[half]\nkind = dichotomy\nalpha = 0.5\nn_first = 4\nn_last = 7\n";
  const auto rec = run_experiment(cfg, o);
  ASSERT_EQ(rec.size(), 1u);
  EXPECT_EQ(rec[0].status, "ok");
  EXPECT_EQ(csv_rows(o.root / "half/dichotomy.csv"), 4);
  const auto j = nlohmann::json::parse(slurp(o.root / "manifest.json"));
  ASSERT_EQ(j["files"].size(), 2u);
  for (const auto& f : j["files"]) {
    EXPECT_EQ(f["sha256"], sha256_file(o.root / f["path"].get<std::string>()));
  }
  EXPECT_FALSE(j["versions"]["fftw"].get<std::string>().empty());
}

TEST(RunExperiment, DeterministicAcrossRuns) {
  const std::string cfg =
      "[global]\nseed = 5\n"
      "[ev]\nkind = evolve\nnx = 32\nny = 8\nK = 6\nL = 2\ntimes = 0.5, 2\n"
      "[scan]\nkind = frequency-scan\ntrials = 3\n";
  RunOptions a, b;
  a.root = fresh_root("det_a");
  b.root = fresh_root("det_b");
  run_experiment(cfg, a);
  run_experiment(cfg, b);
  for (const char* f : {"ev/norms.csv", "ev/snapshot_1.csv", "scan/frequency_scan.csv"}) {
    EXPECT_EQ(slurp(a.root / f), slurp(b.root / f)) << f;
  }
  RunOptions c = a;
  c.root = fresh_root("det_c");
  c.seed = 6;
  c.seed_overridden = true;
  run_experiment(cfg, c);
  EXPECT_NE(slurp(a.root / "ev/snapshot_1.csv"), slurp(c.root / "ev/snapshot_1.csv"));
}

TEST(RunExperiment, BinaryFormatWritesContainers) {
  RunOptions o;
  o.root = fresh_root("bin");
  o.format = OutputFormat::Binary;
  run_experiment("[ev]\nkind = evolve\nnx = 16\nny = 8\nK = 3\nL = 2\ntimes = 1\n", o);
  const SpectralField u = load_field((o.root / "ev/snapshot_0.kpif").string());
  EXPECT_EQ(u.grid().nx(), 16);
  EXPECT_NEAR(u.norm(), 1.0, 1e-12);
}

TEST(RunExperiment, ConfigErrorsCarryLines) {
  RunOptions o;
  o.root = fresh_root("err");
  try {
    run_experiment("[x]\nkind = dichotomy\nalpha = 0.5\nbogus = 1\n", o);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 4);
  }
  try {
    run_experiment("[x]\nkind = teleport\n", o);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(run_experiment("[x]\nkind = dichotomy\nalpha = 3\n", o), ConfigError);
  EXPECT_THROW(run_experiment("[x]\nkind = evolve\ninput = /nonexistent.kpif\n", o),
               ConfigError);
}

TEST(RunExperiment, FailureIsRecordedInManifest) {
  RunOptions o;
  o.root = fresh_root("fail");
  const std::string cfg =
      "[ok]\nkind = dispersion\npoints = 3\n"
      "[bad]\nkind = spectral-constant\nnx = 64\na = 0\nb = 0.2\nprofile = hann-squared\n"
      "m0_max = 14\n";
  EXPECT_THROW(run_experiment(cfg, o), NumericalConsistencyError);
  const auto j = nlohmann::json::parse(slurp(o.root / "manifest.json"));
  ASSERT_EQ(j["experiments"].size(), 2u);
  EXPECT_EQ(j["experiments"][0]["status"], "ok");
  EXPECT_EQ(j["experiments"][1]["status"], "failed");
}
