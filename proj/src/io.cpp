#include "lplab/io.hpp"

#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

static_assert(std::endian::native == std::endian::little, "binary container assumes a little-endian host");

namespace lplab {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw Error("cannot open " + path + " for writing: " + std::strerror(errno));
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path + ": " + std::strerror(errno));
  return in;
}

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw Error("truncated file " + path);
  return v;
}

void put_grid(std::ostream& out, const Grid& g) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dimension()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points_per_axis()));
  put<double>(out, g.half_extent());
}

Grid get_grid(std::istream& in, const std::string& path) {
  const auto dim = get<std::uint32_t>(in, path);
  const auto n = get<std::uint32_t>(in, path);
  const auto L = get<double>(in, path);
  return Grid(static_cast<int>(dim), n, L);
}

void put_values(std::ostream& out, std::span<const Complex> values) {
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
}

std::vector<Complex> get_values(std::istream& in, std::size_t count, const std::string& path) {
  std::vector<Complex> v(count);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(Complex)));
  if (!in) throw Error("truncated file " + path);
  return v;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error("write failed for " + path + ": " + std::strerror(errno));
}

}  // namespace

void write_field(const std::string& path, const SampledField& f) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  put_grid(out, f.grid());
  put_values(out, f.values());
  finish(out, path);
}

SampledField read_field(const std::string& path) {
  auto in = open_in(path);
  const Grid grid = get_grid(in, path);
  return SampledField(grid, get_values(in, grid.size(), path));
}

void write_scale_field(const std::string& path, const ScaleField& f) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  put_grid(out, f.grid());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.scale_count()));
  for (double t : f.scales().scales()) put<double>(out, t);
  put_values(out, f.values());
  finish(out, path);
}

ScaleField read_scale_field(const std::string& path) {
  auto in = open_in(path);
  const Grid grid = get_grid(in, path);
  const auto count = get<std::uint32_t>(in, path);
  std::vector<double> scales(count);
  for (auto& t : scales) t = get<double>(in, path);
  ScaleGrid sg = ScaleGrid::explicit_list(std::move(scales));
  return ScaleField(grid, sg, get_values(in, grid.size() * count, path));
}

void write_field_csv(const std::string& path, const SampledField& f) {
  auto out = open_out(path);
  out << std::setprecision(17);
  const bool two = f.grid().dimension() == 2;
  out << (two ? "index,x,y,Re,Im\n" : "index,x,Re,Im\n");
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Point x = f.grid().point(i);
    out << i << ',' << x[0];
    if (two) out << ',' << x[1];
    out << ',' << f[i].real() << ',' << f[i].imag() << '\n';
  }
  finish(out, path);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  out << std::setprecision(17);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
  finish(out, path);
}

}  // namespace lplab
