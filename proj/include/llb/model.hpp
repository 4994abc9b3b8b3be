#pragma once

#include "llb/grid.hpp"
#include "llb/spectral.hpp"
#include "llb/stray_field.hpp"

#include <limits>

namespace llb {

struct ModelParams {
  double gamma = 1.0;  ///< gyromagnetic ratio
  double L = 1.0;      ///< damping
  double A = 1.0;      ///< exchange
  double chi11 = 1.0;  ///< longitudinal susceptibility; +inf switches the longitudinal term off
  double T = 2.0;
  double Tc = 1.0;
  bool stray_field = true;

  double mu() const { return 3.0 * T / (5.0 * (T - Tc)); }
  double inv_chi() const { return std::isinf(chi11) ? 0.0 : 1.0 / chi11; }
  bool operator==(const ModelParams&) const = default;

  /// Throws std::invalid_argument: needs gamma >= 0, L > 0, A >= 0, chi11 > 0, T > Tc.
  void validate() const;
};

struct EnergyReport {
  double exchange = 0.0;      ///< A/2 int |grad u|^2
  double stray = 0.0;         ///< 1/2 int_{R^3} |grad U|^2
  double longitudinal = 0.0;  ///< 1/(2 chi) int |u|^2 + mu/(4 chi) int |u|^4
  double total = 0.0;
  double dissipation = 0.0;  ///< L int |H|^2
};

/// Right-hand side, effective field and energy of
///   u_t = L H + gamma u x H,
///   H = A Lap u - (1 + mu |u|^2) u / chi - grad U.
/// Holds FFT plans and the stray solver; not thread-safe.
class LlbModel {
 public:
  LlbModel(const FilmGrid& grid, const ModelParams& params, StrayOptions stray = {},
           bool dealias = false);

  const FilmGrid& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  const SpectralBasis& basis() const { return basis_; }
  const StraySolver& stray_solver() const { return stray_; }
  bool dealias() const { return dealias_; }

  /// Zero potential when the stray field is disabled.
  PotentialField potential(const VectorField& u, bool film_only = false) const;

  VectorField exchange_field(const VectorField& u) const;  ///< A Lap u
  VectorField longitudinal_field(const VectorField& u) const;
  VectorField effective_field(const VectorField& u, const PotentialField& U) const;
  VectorField effective_field(const VectorField& u) const;

  /// With `implicit_exchange` the linear term L A Lap u is left out.
  VectorField rhs(const VectorField& u, bool implicit_exchange = false) const;

  EnergyReport energy(const VectorField& u, const PotentialField& U) const;
  EnergyReport energy(const VectorField& u) const;

 private:
  FilmGrid grid_;
  ModelParams params_;
  SpectralBasis basis_;
  StraySolver stray_;
  bool dealias_;
  Eigen::ArrayXd dealias_mask_;
};

VectorField effective_field(const VectorField& u, const PotentialField& U, const ModelParams& params);
VectorField llb_rhs(const VectorField& u, const FilmGrid& grid, const ModelParams& params);
EnergyReport energy_report(const VectorField& u, const FilmGrid& grid, const ModelParams& params);

/// 1 on modes with |index| <= n/3 in every direction, 0 elsewhere.
Eigen::ArrayXd two_thirds_mask(const FilmGrid& grid);

}  // namespace llb
