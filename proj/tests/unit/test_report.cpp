#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kpi/errors.hpp"
#include "kpi/report.hpp"

using namespace kpi;

TEST(Format, Parse) {
  EXPECT_EQ(parse_format("csv"), OutputFormat::Csv);
  EXPECT_EQ(parse_format("json"), OutputFormat::Json);
  EXPECT_EQ(parse_format("bin"), OutputFormat::Binary);
  EXPECT_THROW(parse_format("xml"), ConfigError);
  EXPECT_EQ(to_string(OutputFormat::Binary), "bin");
}

TEST(Table, CsvAndJson) {
  Table t{"demo", {"n", "x", "label", "ok"}, {}};
  t.add_row({(long long)3, 0.1, std::string("a,b"), true});
  std::ostringstream csv;
  write_csv(csv, t);
  EXPECT_EQ(csv.str(), "n,x,label,ok\n3,0.10000000000000001,\"a,b\",true\n");
  std::ostringstream js;
  write_table_json(js, t);
  const auto j = nlohmann::json::parse(js.str());
  EXPECT_EQ(j["table"], "demo");
  EXPECT_EQ(j["rows"][0]["n"], 3);
  EXPECT_DOUBLE_EQ(j["rows"][0]["x"].get<double>(), 0.1);
  EXPECT_THROW(t.add_row({(long long)1}), DimensionError);
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(OutputSink, RecordsArtifactsWithHashes) {
  const auto root = std::filesystem::temp_directory_path() / "kpi_sink_test";
  std::filesystem::remove_all(root);
  OutputSink sink(root, OutputFormat::Csv);
  Table t{"tab", {"a"}, {}};
  t.add_row({1.5});
  sink.write_table("exp", t);
  Summary s;
  s.set("value", 2.0);
  sink.write_summary("exp", s);
  sink.write_binary("exp/blob.bin", [](std::ostream& o) { o << "xyz"; });
  ASSERT_EQ(sink.artifacts().size(), 3u);
  EXPECT_EQ(sink.artifacts()[0].path, "exp/tab.csv");
  EXPECT_EQ(sink.artifacts()[2].sha256, sha256_hex("xyz"));
  EXPECT_EQ(sink.artifacts()[2].bytes, 3u);
  EXPECT_EQ(sha256_file(root / "exp/tab.csv"), sink.artifacts()[0].sha256);
  std::ifstream in(root / "exp/summary.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["value"], 2.0);
  std::filesystem::remove_all(root);
}

TEST(OutputRoot, Environment) {
  ::setenv("KPI_OUTPUT_ROOT", "/tmp/kpi-root-test", 1);
  EXPECT_EQ(output_root_from_env(), std::filesystem::path("/tmp/kpi-root-test"));
  ::unsetenv("KPI_OUTPUT_ROOT");
  EXPECT_EQ(output_root_from_env(), std::filesystem::path("kpi-out"));
}
