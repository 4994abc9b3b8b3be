#include "llb/random_field.hpp"

#include "llb/spectral.hpp"

#include <cmath>
#include <numbers>

namespace llb {

namespace {

Eigen::ArrayXd smoothing(const SpectralBasis& basis, double decay) {
  const FilmGrid& g = basis.grid();
  Eigen::ArrayXd out(g.size());
  for (int m = 0; m < g.nz; ++m)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double nx = basis.kx(i) * g.lx / (2.0 * std::numbers::pi);
        const double ny = basis.ky(j) * g.ly / (2.0 * std::numbers::pi);
        const double nz = basis.kz(m) * g.h / std::numbers::pi;
        out(g.index(i, j, m)) = std::exp(-decay * (nx * nx + ny * ny + nz * nz));
      }
  return out;
}

}  // namespace

VectorField random_smooth_field(const FilmGrid& grid, std::mt19937_64& rng, double decay) {
  std::normal_distribution<double> normal;
  VectorField noise(grid.size(), 3);
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = normal(rng);
  SpectralBasis basis(grid);
  VectorField out = decay > 0.0 ? basis.apply_multiplier(noise, smoothing(basis, decay)) : noise;
  const double rms = std::sqrt(out.square().rowwise().sum().mean());
  return rms > 0.0 ? VectorField(out / rms) : out;
}

ScalarField random_smooth_scalar(const FilmGrid& grid, std::mt19937_64& rng, double decay) {
  std::normal_distribution<double> normal;
  VectorField noise = VectorField::Zero(grid.size(), 3);
  for (Eigen::Index i = 0; i < grid.size(); ++i) noise(i, 0) = normal(rng);
  SpectralBasis basis(grid);
  const VectorField f = decay > 0.0 ? basis.apply_multiplier(noise, smoothing(basis, decay)) : noise;
  ScalarField out = f.col(0);
  const double rms = std::sqrt(out.square().mean());
  return rms > 0.0 ? ScalarField(out / rms) : out;
}

}  // namespace llb
