#pragma once

#include "llb/model.hpp"
#include "llb/trajectory.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace llb {

enum class Scheme { rk4, semi_implicit };

std::string to_string(Scheme s);
/// Accepts "rk4", "semi-implicit" and "semi_implicit".
Scheme parse_scheme(const std::string& name);

struct SimConfig {
  double dt = 1e-3;
  double t_end = 0.0;
  Scheme scheme = Scheme::semi_implicit;
  std::optional<long> galerkin_n;
  bool dealias = false;
  int cadence = 1;             ///< snapshot every `cadence` steps (and at the end)
  double stability_c = 0.25;   ///< RK4 bound dt <= c * min_spacing^2 / (L A)

  bool operator==(const SimConfig&) const = default;
};

/// Raised when an explicit step exceeds the stability bound.
class StabilityError : public std::runtime_error {
 public:
  StabilityError(const std::string& what, double suggested_dt)
      : std::runtime_error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const { return suggested_dt_; }

 private:
  double suggested_dt_;
};

/// Pi_n: keeps the n lowest Laplacian modes.
///
/// n counts real basis functions. Modes are ordered by eigenvalue with ties
/// broken by (m, flat index); a conjugate pair is kept or dropped together, so
/// the retained count can exceed n by one.
class GalerkinProjector {
 public:
  GalerkinProjector(const SpectralBasis& basis, long n);

  const Eigen::ArrayXd& mask() const { return mask_; }
  long retained() const { return retained_; }
  bool is_identity() const { return identity_; }

  VectorField apply(const VectorField& f) const;
  ScalarField apply(const ScalarField& f) const;
  /// Largest coefficient magnitude outside the retained set, relative to the largest overall.
  double leakage(const VectorField& f) const;

 private:
  const SpectralBasis* basis_;
  Eigen::ArrayXd mask_;
  long retained_ = 0;
  bool identity_ = false;
};

/// Throws std::invalid_argument for n < 1. n above the mode count is a no-op.
VectorField galerkin_project(const VectorField& f, const FilmGrid& grid, long n);

/// Largest stable RK4 step, or +inf when A == 0.
double rk4_stable_dt(const FilmGrid& grid, const ModelParams& params, double c = 0.25);

/// Classical RK4 on the full right-hand side. Throws StabilityError above the bound.
VectorField step_rk4(const LlbModel& model, const VectorField& u, double dt,
                     double stability_c = 0.25, const GalerkinProjector* projector = nullptr);

/// First-order step with L A Lap u implicit:
///   u^{n+1} = (1 + dt L A (-Lap))^{-1} (u^n + dt N(u^n)).
VectorField step_semi_implicit(const LlbModel& model, const VectorField& u, double dt,
                               const GalerkinProjector* projector = nullptr);

class Integrator {
 public:
  Integrator(const LlbModel& model, SimConfig config);

  const SimConfig& config() const { return config_; }
  const std::optional<GalerkinProjector>& projector() const { return projector_; }

  VectorField step(const VectorField& u, double dt) const;
  SimState initial_state(const VectorField& u0) const;

  /// Records every step, snapshots at the cadence. A non-finite state aborts the
  /// run; the trajectory then ends with the last finite state.
  Trajectory run(const VectorField& u0) const;

 private:
  const LlbModel* model_;
  SimConfig config_;
  std::optional<GalerkinProjector> projector_;
};

Trajectory run(const LlbModel& model, const SimConfig& config, const VectorField& u0);

}  // namespace llb
