#pragma once

#include "llb/grid.hpp"

namespace llb {

struct FdOracleOptions {
  /// Distance between the Dirichlet walls in units of h.
  double box_multiplier = 64.0;
  /// Vertical extent (units of h, film centred) meshed with the film spacing.
  double uniform_padding = 4.0;
  /// Growth factor of the vertical spacing beyond the uniform region.
  double stretch = 1.15;
  /// In-plane and vertical refinement of the film spacing.
  int refine = 2;
  double tolerance = 1e-10;
  int max_iterations = 20000;
  /// Unknown-count cap; larger problems are rejected.
  Eigen::Index max_unknowns = 400000;
};

struct FdOracleResult {
  FilmGrid grid;
  VectorField film_gradient;  ///< grad U at the film nodes
  double residual = 0.0;      ///< relative residual of the linear solve
  int iterations = 0;
  bool converged = false;
  Eigen::Index unknowns = 0;
};

/// Independent 7-point finite-difference solve of Delta U = div(u chi) in a box
/// with zero Dirichlet walls above and below the film and periodic sides.
/// The source is refined in-plane by trigonometric interpolation and vertically
/// as piecewise constant per film layer.
FdOracleResult fd_poisson_oracle(const VectorField& u, const FilmGrid& grid,
                                 const FdOracleOptions& options = {});

}  // namespace llb
