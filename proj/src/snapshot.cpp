#include "llb/snapshot.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace llb {
namespace {

constexpr std::array<char, 8> kMagic{'L', 'L', 'B', 'F', 'I', 'E', 'L', 'D'};

template <typename T>
void put(std::ostream& os, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  char bytes[sizeof(U)];
  for (std::size_t b = 0; b < sizeof(U); ++b) bytes[b] = char((bits >> (8 * b)) & 0xFF);
  os.write(bytes, sizeof(U));
}

template <typename T>
T get(std::istream& is) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  unsigned char bytes[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(U)))
    throw std::runtime_error("snapshot: truncated stream");
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) bits |= U(bytes[b]) << (8 * b);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_snapshot(std::ostream& os, const FilmGrid& grid, const Eigen::ArrayXXd& values) {
  if (values.rows() != grid.size())
    throw std::invalid_argument("write_snapshot: value count does not match grid");
  os.write(kMagic.data(), kMagic.size());
  put<std::int32_t>(os, grid.nx);
  put<std::int32_t>(os, grid.ny);
  put<std::int32_t>(os, grid.nz);
  put<double>(os, grid.lx);
  put<double>(os, grid.ly);
  put<double>(os, grid.h);
  put<std::int32_t>(os, std::int32_t(values.cols()));
  for (Eigen::Index c = 0; c < values.cols(); ++c)
    for (Eigen::Index n = 0; n < values.rows(); ++n) put<double>(os, values(n, c));
  if (!os) throw std::runtime_error("write_snapshot: stream error");
}

void write_snapshot(const std::filesystem::path& path, const FilmGrid& grid,
                    const Eigen::ArrayXXd& values) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_snapshot: cannot open " + path.string());
  write_snapshot(os, grid, values);
}

FieldSnapshot read_snapshot(std::istream& is) {
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error("snapshot: bad magic");
  const int nx = get<std::int32_t>(is);
  const int ny = get<std::int32_t>(is);
  const int nz = get<std::int32_t>(is);
  const double lx = get<double>(is);
  const double ly = get<double>(is);
  const double h = get<double>(is);
  const int components = get<std::int32_t>(is);
  if (components < 1) throw std::runtime_error("snapshot: bad component count");
  FieldSnapshot snap{make_grid(nx, ny, nz, lx, ly, h), {}};
  snap.values.resize(snap.grid.size(), components);
  for (int c = 0; c < components; ++c)
    for (Eigen::Index n = 0; n < snap.grid.size(); ++n) snap.values(n, c) = get<double>(is);
  return snap;
}

FieldSnapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_snapshot: cannot open " + path.string());
  return read_snapshot(is);
}

}  // namespace llb
