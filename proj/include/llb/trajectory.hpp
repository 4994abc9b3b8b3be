#pragma once

#include "llb/model.hpp"
#include "llb/stray_field.hpp"

#include <limits>
#include <string>
#include <vector>

namespace llb {

struct SimState {
  double t = 0.0;
  long step = 0;
  VectorField u;
  PotentialField U;  ///< solved for u
};

/// Per-step quantities. `avg_*` are average-mode norms over Omega(h); `int_*`
/// are integrals (squared norms and powers) used by the balance monitors.
struct DiagnosticsRecord {
  long step = 0;
  double time = 0.0;

  double avg_u2 = 0.0;
  double avg_u4 = 0.0;
  double avg_u6 = 0.0;
  double avg_grad_u2 = 0.0;
  double avg_lap_u2 = 0.0;
  double grad_U2 = 0.0;  ///< ||grad U||_{L2(R^3)}
  double grad_v2 = 0.0;  ///< ||grad U||_{L2(R^3)} / h

  double int_u2 = 0.0;       ///< int |u|^2
  double int_u4 = 0.0;       ///< int |u|^4
  double int_grad_u2 = 0.0;  ///< -int u . Lap u
  double int_lap_u2 = 0.0;   ///< int |Lap u|^2
  double int_grad_U2 = 0.0;  ///< int_{R^3} |grad U|^2

  EnergyReport energy;

  /// Filled from neighbouring snapshots; NaN on records without a snapshot.
  double ut_norm = std::numeric_limits<double>::quiet_NaN();
  double vt_norm = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
  std::vector<SimState> snapshots;
  std::vector<DiagnosticsRecord> records;  ///< one per step, starting at step 0
  bool ok = true;
  std::string failure;  ///< set when the run aborted

  const SimState& last() const { return snapshots.back(); }
};

}  // namespace llb
