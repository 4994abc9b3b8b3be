#include "llb/grid.hpp"

#include <stdexcept>
#include <string>

namespace llb {

FilmGrid make_grid(int nx, int ny, int nz, double lx, double ly, double h) {
  if (nx < 2 || ny < 2 || nz < 2)
    throw std::invalid_argument("make_grid: counts must be >= 2 (got " + std::to_string(nx) + ", " +
                                std::to_string(ny) + ", " + std::to_string(nz) + ")");
  auto ok = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!ok(lx) || !ok(ly) || !ok(h))
    throw std::invalid_argument("make_grid: lengths must be positive and finite");
  return FilmGrid{nx, ny, nz, lx, ly, h};
}

FilmGrid with_thickness(const FilmGrid& grid, double h) {
  return make_grid(grid.nx, grid.ny, grid.nz, grid.lx, grid.ly, h);
}

}  // namespace llb
