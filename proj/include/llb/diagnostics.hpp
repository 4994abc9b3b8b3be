#pragma once

#include "llb/grid.hpp"
#include "llb/model.hpp"
#include "llb/trajectory.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace llb {

DiagnosticsRecord compute_record(const LlbModel& model, const SimState& state);

/// (1/sqrt h) * vertical mean of |u|^2 u3.
PlanarField compute_w1(const VectorField& u, const FilmGrid& grid);
/// (1/sqrt h) * vertical mean of |u|^2 dU/dx3 (film gradient of U).
PlanarField compute_w2(const VectorField& u, const PotentialField& U);

/// int_Omega w phi.
double pairing(const FilmGrid& grid, const PlanarField& w, const PlanarField& phi);

struct ProductGap {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double rel = 1e-10) const { return lhs <= rhs * (1.0 + rel); }
};

/// lhs = |int_Omega (mean_3(f g) - mean_3 f * mean_3 g)|,
/// rhs = h |Omega| (avg |df/dx3|^p)^(1/p) (avg |g|^q)^(1/q), averages over Omega(h).
/// Throws std::invalid_argument unless 1/p + 1/q = 1 with p, q > 1.
ProductGap product_average_gap(const SpectralBasis& basis, const ScalarField& f,
                               const ScalarField& g, double p, double q);
ProductGap product_average_gap(const FilmGrid& grid, const ScalarField& f, const ScalarField& g,
                               double p, double q);

struct BalanceSeries {
  std::vector<double> time;
  /// ||u(t)||^2 + 2L int (A ||grad u||^2 + ||grad U||^2) + 2L/chi int (||u||^2 + mu ||u||_4^4) - ||u(0)||^2
  std::vector<double> balance;
  /// ||grad u(t)||^2 + 2 L A int ||Lap u||^2 - ||grad u(0)||^2
  std::vector<double> gradient_raw;
  /// gradient_raw - slack * int ||u||^2
  std::vector<double> gradient_slack;
};

/// Trapezoid rule in time over consecutive records.
BalanceSeries energy_estimate_monitors(const std::vector<DiagnosticsRecord>& records,
                                       const ModelParams& params, double slack = 1.0);

struct RateMonitor {
  std::vector<double> time;
  std::vector<double> density;  ///< integrand at each snapshot
  double integral = 0.0;
};

/// (avg |u_t|^{3/2})^{4/3} at each snapshot, u_t by central differences.
RateMonitor ut_monitor(const std::vector<SimState>& snapshots);
/// ||v_t||^2_{L2(R^3)} at each snapshot with v = U / h.
RateMonitor vt_monitor(const std::vector<SimState>& snapshots);

/// Copies the snapshot rate monitors into the matching records.
void fill_rate_monitors(Trajectory& trajectory);

/// -omega = (ubar/|ubar|) ^ d/dt (ubar/|ubar|) by central differences; zero
/// wherever |ubar| < floor at a time used by the stencil.
std::vector<PlanarField> angular_velocity(const std::vector<PlanarVectorField>& ubar,
                                          const std::vector<double>& times, double floor = 1e-8);

struct TestFunction {
  std::string name;
  PlanarField values;
};

/// 1, cos/sin 2 pi x, cos/sin 2 pi y, cos 2 pi x cos 2 pi y, sin 2 pi (x + y), two bumps.
std::vector<TestFunction> default_test_bank(const FilmGrid& grid);

/// One row per snapshot; a leading '#' line names the columns.
void write_diagnostics_csv(std::ostream& os, const Trajectory& trajectory, const ModelParams& params);

/// printf("%.17g").
std::string format_double(double v);

}  // namespace llb
