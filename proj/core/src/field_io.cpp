#include "kpi/field_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "kpi/errors.hpp"

namespace kpi {

namespace {

constexpr std::uint32_t kVersion = 1;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::array<unsigned char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    std::reverse(b.begin(), b.end());
    std::memcpy(&v, b.data(), sizeof(T));
  }
  return v;
}

template <class T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DimensionError("unexpected end of container");
  return to_little(v);
}

void put_magic(std::ostream& out, const char (&magic)[5]) { out.write(magic, 4); }

void expect_magic(std::istream& in, const char (&magic)[5]) {
  char buf[4];
  in.read(buf, 4);
  if (!in || std::memcmp(buf, magic, 4) != 0) {
    throw DimensionError(std::string("bad container magic, expected ") + magic);
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) {
    throw DimensionError("unsupported container version " + std::to_string(version));
  }
}

}  // namespace

std::uint32_t field_truncation(const SpectralField& field) {
  const TorusGrid& g = field.grid();
  std::uint32_t t = 0;
  for (int l = g.l_min(); l <= g.l_max(); ++l)
    for (int k = g.k_min(); k <= g.k_max(); ++k)
      if (field(k, l) != cplx(0.0)) t = std::max<std::uint32_t>(t, std::abs(k));
  return t;
}

void write_field(std::ostream& out, const SpectralField& field) {
  const TorusGrid& g = field.grid();
  put_magic(out, "KPIF");
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, g.dimension());
  put<std::uint32_t>(out, g.nx());
  put<std::uint32_t>(out, g.ny());
  put<std::uint32_t>(out, field_truncation(field));
  for (const cplx& c : field.coefficients()) {
    put<double>(out, c.real());
    put<double>(out, c.imag());
  }
}

SpectralField read_field(std::istream& in) {
  expect_magic(in, "KPIF");
  const auto dim = get<std::uint32_t>(in);
  const auto nx = static_cast<int>(get<std::uint32_t>(in));
  const auto ny = static_cast<int>(get<std::uint32_t>(in));
  const auto truncation = get<std::uint32_t>(in);
  if (dim != 1 && dim != 2) throw DimensionError("field dimension must be 1 or 2");
  if (dim == 1 && ny != 1) throw DimensionError("1D field container must have ny = 1");
  const TorusGrid grid = dim == 1 ? TorusGrid::line(nx) : TorusGrid::plane(nx, ny);
  std::vector<cplx> coeffs(grid.size());
  for (cplx& c : coeffs) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    c = {re, im};
  }
  SpectralField field(grid, std::move(coeffs));
  if (field_truncation(field) != truncation) {
    throw DimensionError("field container truncation header disagrees with its data");
  }
  return field;
}

void save_field(const std::string& path, const SpectralField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_field(out, field);
}

SpectralField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_field(in);
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_field_csv(std::ostream& out, const SpectralField& field) {
  const TorusGrid& g = field.grid();
  out << "k,l,re,im\n";
  for (int l = g.l_min(); l <= g.l_max(); ++l) {
    for (int k = g.k_min(); k <= g.k_max(); ++k) {
      const cplx c = field(k, l);
      out << k << ',' << l << ',' << format_double(c.real()) << ','
          << format_double(c.imag()) << '\n';
    }
  }
}

void write_matrix(std::ostream& out, const MatrixRecord& record) {
  const auto rows = static_cast<std::uint32_t>(record.matrix.rows());
  const auto cols = static_cast<std::uint32_t>(record.matrix.cols());
  if (record.free_indices.size() != rows) {
    throw DimensionError("matrix record needs one free index per row");
  }
  put_magic(out, "KPIM");
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, rows);
  put<std::uint32_t>(out, cols);
  put<std::int32_t>(out, record.fixed_index);
  put<std::uint32_t>(out, record.orientation);
  put<double>(out, record.horizon);
  for (std::int32_t i : record.free_indices) put<std::int32_t>(out, i);
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      put<double>(out, record.matrix(r, c).real());
      put<double>(out, record.matrix(r, c).imag());
    }
  }
}

MatrixRecord read_matrix(std::istream& in) {
  expect_magic(in, "KPIM");
  MatrixRecord rec;
  const auto rows = get<std::uint32_t>(in);
  const auto cols = get<std::uint32_t>(in);
  rec.fixed_index = get<std::int32_t>(in);
  rec.orientation = get<std::uint32_t>(in);
  rec.horizon = get<double>(in);
  rec.free_indices.resize(rows);
  for (auto& i : rec.free_indices) i = get<std::int32_t>(in);
  rec.matrix.resize(rows, cols);
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      const double re = get<double>(in);
      const double im = get<double>(in);
      rec.matrix(r, c) = {re, im};
    }
  }
  return rec;
}

void write_trajectory(std::ostream& out, const TrajectoryRecord& record) {
  if (record.times.size() != record.controls.size()) {
    throw DimensionError("trajectory needs one control field per time node");
  }
  put_magic(out, "KPIT");
  put<std::uint32_t>(out, kVersion);
  put<double>(out, record.horizon);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(record.times.size()));
  write_field(out, record.adjoint_datum);
  for (std::size_t i = 0; i < record.times.size(); ++i) {
    put<double>(out, record.times[i]);
    write_field(out, record.controls[i]);
  }
}

TrajectoryRecord read_trajectory(std::istream& in) {
  expect_magic(in, "KPIT");
  const double horizon = get<double>(in);
  const auto count = get<std::uint32_t>(in);
  TrajectoryRecord rec{horizon, read_field(in), {}, {}};
  rec.times.reserve(count);
  rec.controls.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    rec.times.push_back(get<double>(in));
    rec.controls.push_back(read_field(in));
  }
  return rec;
}

}  // namespace kpi
