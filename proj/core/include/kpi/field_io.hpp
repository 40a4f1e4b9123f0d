#pragma once

// Binary containers and CSV exports.
//
// Field container, all integers and floats little-endian:
//
//   offset  size  content
//   0       4     magic "KPIF"
//   4       4     u32 format version (1)
//   8       4     u32 dimension (1 or 2)
//   12      4     u32 nx
//   16      4     u32 ny (1 for 1D)
//   20      4     u32 truncation: largest |k| carrying a nonzero coefficient
//   24      16*N  N = nx*ny coefficients as (f64 re, f64 im), l-major from
//                 l = -ny/2, k ascending from -nx/2 inside each l row.
//
// Matrix container ("KPIM"): version, u32 rows, u32 cols, i32 fixed index,
// u32 orientation, f64 horizon, rows x i32 free indices, then rows*cols
// (f64 re, f64 im) row-major.
//
// Trajectory container ("KPIT"): version, f64 horizon, u32 node count, the
// adjoint datum as an embedded field container, then per node f64 time
// followed by an embedded field container.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kpi/fourier.hpp"

namespace kpi {

void write_field(std::ostream& out, const SpectralField& field);
SpectralField read_field(std::istream& in);

void save_field(const std::string& path, const SpectralField& field);
SpectralField load_field(const std::string& path);

/// Largest |k| with a coefficient of magnitude above zero.
std::uint32_t field_truncation(const SpectralField& field);

/// Rows "k,l,re,im" for every coefficient, k fastest.
void write_field_csv(std::ostream& out, const SpectralField& field);

struct MatrixRecord {
  std::int32_t fixed_index = 0;
  std::uint32_t orientation = 0;
  double horizon = 0.0;
  std::vector<std::int32_t> free_indices;
  Eigen::MatrixXcd matrix;
};

void write_matrix(std::ostream& out, const MatrixRecord& record);
MatrixRecord read_matrix(std::istream& in);

struct TrajectoryRecord {
  double horizon = 0.0;
  SpectralField adjoint_datum;
  std::vector<double> times;
  std::vector<SpectralField> controls;
};

void write_trajectory(std::ostream& out, const TrajectoryRecord& record);
TrajectoryRecord read_trajectory(std::istream& in);

/// %.17g formatting so CSV output is exact and byte-reproducible.
std::string format_double(double value);

}  // namespace kpi
