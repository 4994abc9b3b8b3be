#pragma once

#include "llb/grid.hpp"

#include <random>

namespace llb {

/// Gaussian white noise filtered by exp(-decay |n|^2), where n counts in-plane periods
/// and vertical half-periods, scaled to unit RMS. decay = 0 gives white noise.
ScalarField random_smooth_scalar(const FilmGrid& grid, std::mt19937_64& rng, double decay = 0.5);
VectorField random_smooth_field(const FilmGrid& grid, std::mt19937_64& rng, double decay = 0.5);

}  // namespace llb
