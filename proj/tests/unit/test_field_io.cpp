#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "kpi/errors.hpp"
#include "kpi/field_io.hpp"
#include "kpi/random_fields.hpp"

using namespace kpi;

TEST(FieldContainer, RoundTripIsExact) {
  Rng rng(1);
  for (const TorusGrid& g : {TorusGrid::line(64), TorusGrid::plane(32, 8)}) {
    const SpectralField u = random_field(g, rng);
    std::stringstream ss;
    write_field(ss, u);
    EXPECT_EQ(read_field(ss), u);
  }
}

TEST(FieldContainer, FileRoundTripAndErrors) {
  Rng rng(2);
  const SpectralField u = random_field(TorusGrid::plane(16, 8), rng, 3, 2);
  const auto path = std::filesystem::temp_directory_path() / "kpi_field_io_test.kpif";
  save_field(path.string(), u);
  EXPECT_EQ(load_field(path.string()), u);
  EXPECT_EQ(field_truncation(u), 3u);
  std::filesystem::remove(path);
  EXPECT_THROW(load_field(path.string()), Error);

  std::stringstream junk("NOPE1234");
  EXPECT_THROW(read_field(junk), DimensionError);
  std::stringstream ss;
  write_field(ss, u);
  std::string bytes = ss.str();
  bytes.resize(bytes.size() - 5);
  std::stringstream cut(bytes);
  EXPECT_THROW(read_field(cut), DimensionError);
}

TEST(MatrixContainer, RoundTrip) {
  MatrixRecord r;
  r.fixed_index = -3;
  r.orientation = 1;
  r.horizon = 1.25;
  r.free_indices = {-2, -1, 1};
  r.matrix = Eigen::MatrixXcd::Random(3, 3);
  std::stringstream ss;
  write_matrix(ss, r);
  const MatrixRecord b = read_matrix(ss);
  EXPECT_EQ(b.fixed_index, -3);
  EXPECT_EQ(b.orientation, 1u);
  EXPECT_EQ(b.horizon, 1.25);
  EXPECT_EQ(b.free_indices, r.free_indices);
  EXPECT_EQ(b.matrix, r.matrix);
  r.free_indices.pop_back();
  EXPECT_THROW(write_matrix(ss, r), DimensionError);
}

TEST(TrajectoryContainer, RoundTrip) {
  Rng rng(3);
  const TorusGrid g = TorusGrid::plane(16, 8);
  TrajectoryRecord t{2.0, random_field(g, rng), {0.0, 1.0, 2.0},
                     {random_field(g, rng), random_field(g, rng), random_field(g, rng)}};
  std::stringstream ss;
  write_trajectory(ss, t);
  const TrajectoryRecord b = read_trajectory(ss);
  EXPECT_EQ(b.horizon, 2.0);
  EXPECT_EQ(b.adjoint_datum, t.adjoint_datum);
  EXPECT_EQ(b.times, t.times);
  ASSERT_EQ(b.controls.size(), 3u);
  EXPECT_EQ(b.controls[2], t.controls[2]);
  t.times.pop_back();
  EXPECT_THROW(write_trajectory(ss, t), DimensionError);
}

TEST(FieldCsv, RowsAndExactFormatting) {
  SpectralField u(TorusGrid::line(4));
  u(1) = cplx(0.1, -2.0);
  std::stringstream ss;
  write_field_csv(ss, u);
  std::string header, first;
  std::getline(ss, header);
  EXPECT_EQ(header, "k,l,re,im");
  int rows = 0;
  std::string line, row1;
  while (std::getline(ss, line)) {
    if (line.rfind("1,0,", 0) == 0) row1 = line;
    ++rows;
  }
  EXPECT_EQ(rows, 4);
  EXPECT_EQ(row1, "1,0,0.10000000000000001,-2");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
}
