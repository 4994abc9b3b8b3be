#pragma once

#include "llb/grid.hpp"
#include "llb/spectral.hpp"

#include <memory>

namespace llb {

struct StrayOptions {
  /// Vertical extent of the resolved box in units of h (film centred). Must be >= 1.
  double padding = 4.0;
  /// Boundary-layer |grad U| above this fraction of the interior maximum raises the flag.
  double decay_fraction = 0.25;
};

/// Magnetostatic potential of the film on a vertically padded grid.
///
/// U lives on the cell faces of the padded column, grad U on the cell centres, so
/// the film cells coincide with the film nodes. Outside the box every in-plane
/// mode continues as its exact decaying harmonic extension, whose energy is kept
/// in closed form. grad U is the L2 projection of u * chi onto gradients, so
///   int_{R^3} |grad U|^2 = int_{Omega(h)} u . grad U
/// holds to round-off.
struct PotentialField {
  FilmGrid grid;
  int pad_cells = 0;  ///< padded cells on each side of the film
  int nz_total = 0;   ///< nz + 2 * pad_cells
  /// False when only the film slice of `gradient` was reconstructed.
  bool complete = true;

  ScalarField potential;  ///< faces: planar * (nz_total + 1)
  VectorField gradient;   ///< cells: planar * nz_total
  Eigen::ArrayXcd bottom_trace;  ///< in-plane coefficients of U on the lowest face
  Eigen::ArrayXcd top_trace;     ///< ... and on the highest face
  Eigen::ArrayXd decay_rate;     ///< |k| used by the exterior extension, per in-plane mode

  double boundary_ratio = 0.0;
  bool decay_ok = true;

  double dz() const { return grid.dz(); }
  double cell_volume() const { return grid.cell_volume(); }
  int film_offset() const { return pad_cells; }

  VectorField film_gradient() const;
  /// U at the film nodes (mean of the two bounding faces).
  ScalarField film_potential() const;
  /// int over the exterior of the box of |grad U|^2, closed form.
  double exterior_energy() const;
  /// int_{R^3} |grad U|^2: box quadrature plus exterior.
  double gradient_norm_sq() const;
};

/// FFT in-plane, tridiagonal per-mode solve in x3. Reusable for a fixed grid.
class StraySolver {
 public:
  explicit StraySolver(const FilmGrid& grid, StrayOptions options = {});

  const FilmGrid& grid() const { return grid_; }
  const StrayOptions& options() const { return options_; }
  int pad_cells() const { return pad_cells_; }

  /// `film_only` skips reconstructing U and grad U outside the film.
  PotentialField solve(const VectorField& u, bool film_only = false) const;
  PotentialField zero() const;

 private:
  FilmGrid grid_;
  StrayOptions options_;
  int pad_cells_;
  std::unique_ptr<SpectralBasis> basis_;
};

/// Throws std::invalid_argument for padding < 1.
PotentialField solve_potential(const VectorField& u, const FilmGrid& grid, double padding = 4.0);

/// 1/2 int_{R^3} |grad U|^2.
double stray_energy(const PotentialField& U);

/// int_{R^3} |U|^2 over the box plus the decaying tails of the nonzero in-plane
/// modes. The zero mode is constant outside the film and is counted on the box only.
double potential_l2_sq(const PotentialField& U);
double potential_difference_l2_sq(const PotentialField& a, const PotentialField& b);

struct LpBoundCheck {
  bool defined = false;  ///< false when ||u||_p == 0
  double field_norm = 0.0;
  double source_norm = 0.0;
  double ratio = 0.0;
};

/// ||grad U||_{L^p(R^3)} / ||u||_{L^p(Omega(h))}. For p == 2 the exterior is
/// included exactly; otherwise the numerator is the box quadrature.
LpBoundCheck check_lp_bound(const VectorField& u, const PotentialField& U, double p);

/// Potential trace and in-plane gradient of the limit surface problem
///   Delta v = div(u chi_Omega) (x) delta_{x3 = 0}.
struct SurfaceStray {
  PlanarField trace;
  PlanarVectorField gradient;
};

SurfaceStray surface_stray(const SpectralBasis& basis, const PlanarVectorField& u2d);
SurfaceStray surface_stray(const FilmGrid& grid, const PlanarVectorField& u2d);

}  // namespace llb
