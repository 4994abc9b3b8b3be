#pragma once

#include "llb/grid.hpp"

#include <filesystem>
#include <iosfwd>

namespace llb {

/// Binary field snapshot.
///
/// Layout (all little-endian):
///   char[8]  magic "LLBFIELD"
///   int32    nx, ny, nz
///   float64  lx, ly, h
///   int32    component count
///   float64  values: component-major, each component in x-fastest node order
struct FieldSnapshot {
  FilmGrid grid;
  Eigen::ArrayXXd values;  // rows = nodes, cols = components
};

void write_snapshot(std::ostream& os, const FilmGrid& grid, const Eigen::ArrayXXd& values);
void write_snapshot(const std::filesystem::path& path, const FilmGrid& grid,
                    const Eigen::ArrayXXd& values);

/// Throws std::runtime_error on a malformed or truncated stream.
FieldSnapshot read_snapshot(std::istream& is);
FieldSnapshot read_snapshot(const std::filesystem::path& path);

}  // namespace llb
