#pragma once

#include "llb/diagnostics.hpp"
#include "llb/integrator.hpp"
#include "llb/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace llb {

/// gamma(h) = 1/sqrt(h), L(h) = a sqrt(h), A(h) = epsilon h, so that
/// L/(gamma h) = a, gamma sqrt(h) = 1, A/h = epsilon and h gamma^2 = 1.
struct ScalingLaw {
  double a = 1.0;
  double epsilon = 1.0;

  double gamma(double h) const { return 1.0 / std::sqrt(h); }
  double L(double h) const { return a * std::sqrt(h); }
  double A(double h) const { return epsilon * h; }
  double beta() const { return 1.0; }

  bool operator==(const ScalingLaw&) const = default;
};

/// chi11, T, Tc and the stray switch come from `base`. Throws for h <= 0.
ModelParams scaled_params(double h, const ScalingLaw& law, const ModelParams& base = {});

enum class AmplitudeRule { paper, unit };
std::string to_string(AmplitudeRule r);
AmplitudeRule parse_amplitude_rule(const std::string& name);

/// s(h) = h for `paper`, 1 for `unit`.
double amplitude_scale(double h, AmplitudeRule rule);

/// u0(x, x3) = s(h) profile(x), independent of x3.
VectorField scaled_initial_data(const FilmGrid& grid, const PlanarVector3Field& profile,
                                AmplitudeRule rule);

/// r(x) (cos theta(x), sin theta(x), 0) with r in [0.8, 1.2] and theta in
/// [-angle, angle], both random trigonometric polynomials of in-plane degree `degree`.
PlanarVector3Field default_profile(const FilmGrid& grid, std::uint64_t seed, double angle = 0.25,
                                   int degree = 1);
/// Profile names accepted by the configuration: "default", "uniform-x", "zero".
PlanarVector3Field make_profile(const std::string& name, const FilmGrid& grid, std::uint64_t seed);

struct LimitResidual {
  std::vector<std::string> names;  ///< test function per row
  int time_modes = 2;              ///< psi_m(t) = sin(m pi t / T), m = 1..time_modes
  Eigen::ArrayXXd entries;         ///< rows: test functions, cols: time modes
  double scale = 0.0;              ///< sup_t avg |ubar|^2
  Eigen::ArrayXXd normalized() const;
};

/// R = ubar ^ (d_tt ubar - eps |ubar|^2 Lap' ubar + |ubar|^2 grad' v) at the middle of
/// three equally spaced samples.
PlanarField limit_residual_density(const SpectralBasis& basis, const PlanarVectorField& prev,
                                   const PlanarVectorField& mid, const PlanarVectorField& next,
                                   double dt, double epsilon);

/// Weak entries int int R phi_j psi_m over the interior samples. The time grid must be
/// uniform. Throws std::invalid_argument for fewer than three samples.
LimitResidual limit_residual(const FilmGrid& grid, const std::vector<PlanarVectorField>& ubar,
                             const std::vector<double>& times, const ScalingLaw& law,
                             const std::vector<TestFunction>& bank, int time_modes = 2);

/// In-plane components of the vertical mean.
PlanarVectorField planar_mean(const FilmGrid& grid, const VectorField& u);

struct SweepSettings {
  std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
  int nx = 16, ny = 16, nz = 2;
  double lx = 1.0, ly = 1.0;
  ScalingLaw law;
  ModelParams base;  ///< chi11, T, Tc, stray switch
  SimConfig sim{2.5e-4, 1.0, Scheme::rk4, std::nullopt, false, 40, 0.25};
  double padding = 4.0;
  AmplitudeRule rule = AmplitudeRule::unit;
  std::string profile = "default";
  std::uint64_t seed = 1;
  int threads = 1;
};

struct SweepRun {
  double h = 0.0;
  bool ok = true;
  std::string failure;
  std::vector<double> times;
  std::vector<DiagnosticsRecord> records;  ///< at the snapshot times
  /// |<w1 - w2, phi_j>| per test function (outer) and snapshot (inner).
  std::vector<std::vector<double>> pairing_series;
  std::vector<double> pairing_integrals;  ///< int_0^T of the series
  LimitResidual residual;
  double ut_integral = 0.0;
  double vt_integral = 0.0;
};

struct SweepReport {
  AmplitudeRule rule = AmplitudeRule::unit;
  ScalingLaw law;
  std::vector<std::string> test_names;
  std::vector<SweepRun> runs;  ///< in the order of `hs`
};

/// Throws std::invalid_argument unless hs is non-empty and strictly decreasing.
/// A failed run is recorded and the sweep continues.
SweepReport run_sweep(const SweepSettings& settings);

struct ConvergenceFit {
  double slope = 0.0;  ///< d log(value) / d log(h); NaN when undefined
  bool monotone = false;  ///< strictly decreasing along decreasing h
  std::string verdict;    ///< "identically zero", "decaying" or "no decay"
};

ConvergenceFit convergence_fit(const std::vector<double>& hs, const std::vector<double>& values);

struct ConvergenceReport {
  std::vector<std::string> series;
  std::vector<ConvergenceFit> fits;
};

/// Pairing integrals, normalized residual entries and the u_t / v_t monitors.
ConvergenceReport convergence_report(const SweepReport& report);

/// Long-form CSV: rule,h,quantity,name,value.
void write_sweep_csv(std::ostream& os, const SweepReport& report);
/// Long-form CSV of the pairing time series: rule,h,time,name,value.
void write_pairing_csv(std::ostream& os, const SweepReport& report);
void write_sweep_summary(std::ostream& os, const SweepReport& report);

}  // namespace llb
