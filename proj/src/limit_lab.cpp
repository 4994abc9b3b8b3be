#include "llb/limit_lab.hpp"

#include "llb/norms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace llb {

ModelParams scaled_params(double h, const ScalingLaw& law, const ModelParams& base) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("scaled_params: h must be > 0");
  ModelParams p = base;
  p.gamma = law.gamma(h);
  p.L = law.L(h);
  p.A = law.A(h);
  return p;
}

std::string to_string(AmplitudeRule r) { return r == AmplitudeRule::paper ? "paper" : "unit"; }

AmplitudeRule parse_amplitude_rule(const std::string& name) {
  if (name == "paper") return AmplitudeRule::paper;
  if (name == "unit") return AmplitudeRule::unit;
  throw std::invalid_argument("unknown amplitude rule '" + name + "'");
}

double amplitude_scale(double h, AmplitudeRule rule) { return rule == AmplitudeRule::paper ? h : 1.0; }

VectorField scaled_initial_data(const FilmGrid& grid, const PlanarVector3Field& profile,
                                AmplitudeRule rule) {
  if (profile.rows() != grid.planar_size())
    throw std::invalid_argument("scaled_initial_data: profile size mismatch");
  return amplitude_scale(grid.h, rule) * extrude(grid, profile);
}

namespace {

// Random trigonometric polynomial of in-plane degree <= `degree`, scaled to max |f| = 1.
PlanarField smooth_random(const FilmGrid& g, std::mt19937_64& rng, int degree) {
  using std::numbers::pi;
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  PlanarField f = PlanarField::Zero(g.planar_size());
  for (int a = 0; a <= degree; ++a)
    for (int b = -degree; b <= degree; ++b) {
      if (a == 0 && b <= 0) continue;
      const double c = coef(rng), s = coef(rng);
      const double weight = 1.0 / (a * a + b * b);
      f += weight * sample_planar(g, [&](double x, double y) {
             const double arg = 2.0 * pi * (a * x / g.lx + b * y / g.ly);
             return c * std::cos(arg) + s * std::sin(arg);
           });
    }
  const double peak = f.abs().maxCoeff();
  return peak > 0.0 ? PlanarField(f / peak) : f;
}

}  // namespace

PlanarVector3Field default_profile(const FilmGrid& grid, std::uint64_t seed, double angle,
                                   int degree) {
  std::mt19937_64 rng(seed);
  const PlanarField r = 1.0 + 0.2 * smooth_random(grid, rng, degree);
  const PlanarField theta = angle * smooth_random(grid, rng, degree);
  PlanarVector3Field out(grid.planar_size(), 3);
  out.col(0) = r * theta.cos();
  out.col(1) = r * theta.sin();
  out.col(2).setZero();
  return out;
}

PlanarVector3Field make_profile(const std::string& name, const FilmGrid& grid, std::uint64_t seed) {
  if (name == "default") return default_profile(grid, seed);
  PlanarVector3Field out = PlanarVector3Field::Zero(grid.planar_size(), 3);
  if (name == "uniform-x") {
    out.col(0).setOnes();
    return out;
  }
  if (name == "zero") return out;
  throw std::invalid_argument("unknown profile '" + name + "'");
}

Eigen::ArrayXXd LimitResidual::normalized() const {
  return scale > 0.0 ? Eigen::ArrayXXd(entries / scale) : entries;
}

PlanarVectorField planar_mean(const FilmGrid& grid, const VectorField& u) {
  return vertical_average(grid, u.leftCols<2>());
}

PlanarField limit_residual_density(const SpectralBasis& basis, const PlanarVectorField& prev,
                                   const PlanarVectorField& mid, const PlanarVectorField& next,
                                   double dt, double epsilon) {
  const PlanarVectorField utt = (next - 2.0 * mid + prev) / (dt * dt);
  const PlanarField r2 = mid.square().rowwise().sum();
  PlanarVectorField lap(mid.rows(), 2);
  lap.col(0) = basis.planar_laplacian(mid.col(0));
  lap.col(1) = basis.planar_laplacian(mid.col(1));
  const PlanarVectorField grad_v = surface_stray(basis, mid).gradient;
  const PlanarVectorField x =
      utt - epsilon * r2.replicate(1, 2) * lap + r2.replicate(1, 2) * grad_v;
  return wedge(mid, x);
}

LimitResidual limit_residual(const FilmGrid& grid, const std::vector<PlanarVectorField>& ubar,
                             const std::vector<double>& times, const ScalingLaw& law,
                             const std::vector<TestFunction>& bank, int time_modes) {
  using std::numbers::pi;
  const std::size_t n = ubar.size();
  if (n < 3 || times.size() != n)
    throw std::invalid_argument("limit_residual: need at least three samples with times");
  const double dt = times[1] - times[0];
  for (std::size_t i = 1; i < n; ++i)
    if (!(dt > 0.0) || std::abs(times[i] - times[i - 1] - dt) > 1e-9 * dt)
      throw std::invalid_argument("limit_residual: time samples must be uniform");

  const SpectralBasis basis(grid);
  const double span = times.back() - times.front();
  LimitResidual out;
  out.time_modes = time_modes;
  out.entries = Eigen::ArrayXXd::Zero(Eigen::Index(bank.size()), time_modes);
  for (const TestFunction& f : bank) out.names.push_back(f.name);
  for (const PlanarVectorField& u : ubar) out.scale = std::max(out.scale, u.square().rowwise().sum().mean());

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const PlanarField R =
        limit_residual_density(basis, ubar[i - 1], ubar[i], ubar[i + 1], dt, law.epsilon);
    const double s = (times[i] - times.front()) / span;
    for (std::size_t j = 0; j < bank.size(); ++j) {
      const double p = pairing(grid, R, bank[j].values);
      for (int m = 1; m <= time_modes; ++m)
        out.entries(Eigen::Index(j), m - 1) += dt * p * std::sin(m * pi * s);
    }
  }
  return out;
}

namespace {

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double sum = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) sum += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return sum;
}

SweepRun run_one(const SweepSettings& st, double h, const std::vector<TestFunction>& bank_shape) {
  SweepRun out;
  out.h = h;
  try {
    const FilmGrid grid = make_grid(st.nx, st.ny, st.nz, st.lx, st.ly, h);
    const ModelParams params = scaled_params(h, st.law, st.base);
    const LlbModel model(grid, params, StrayOptions{st.padding}, st.sim.dealias);
    const VectorField u0 =
        scaled_initial_data(grid, make_profile(st.profile, grid, st.seed), st.rule);
    Trajectory tr = run(model, st.sim, u0);
    if (!tr.ok) {
      out.ok = false;
      out.failure = tr.failure;
    }
    std::vector<PlanarVectorField> ubar;
    out.pairing_series.assign(bank_shape.size(), {});
    for (const SimState& s : tr.snapshots) {
      out.times.push_back(s.t);
      out.records.push_back(tr.records[std::size_t(s.step)]);
      ubar.push_back(planar_mean(grid, s.u));
      const PlanarField w = compute_w1(s.u, grid) - compute_w2(s.u, s.U);
      for (std::size_t j = 0; j < bank_shape.size(); ++j)
        out.pairing_series[j].push_back(std::abs(pairing(grid, w, bank_shape[j].values)));
    }
    for (const auto& series : out.pairing_series) out.pairing_integrals.push_back(trapezoid(out.times, series));
    if (ubar.size() >= 3) out.residual = limit_residual(grid, ubar, out.times, st.law, bank_shape);
    out.ut_integral = ut_monitor(tr.snapshots).integral;
    out.vt_integral = vt_monitor(tr.snapshots).integral;
  } catch (const std::exception& e) {
    out.ok = false;
    out.failure = e.what();
  }
  return out;
}

}  // namespace

SweepReport run_sweep(const SweepSettings& st) {
  if (st.hs.empty()) throw std::invalid_argument("run_sweep: no thickness values");
  for (std::size_t i = 1; i < st.hs.size(); ++i)
    if (!(st.hs[i] < st.hs[i - 1]))
      throw std::invalid_argument("run_sweep: thickness values must be strictly decreasing");

  SweepReport report;
  report.rule = st.rule;
  report.law = st.law;
  const auto bank = default_test_bank(make_grid(st.nx, st.ny, st.nz, st.lx, st.ly, st.hs.front()));
  for (const auto& f : bank) report.test_names.push_back(f.name);
  report.runs.resize(st.hs.size());

  const int workers = std::clamp(st.threads, 1, int(st.hs.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < st.hs.size(); ++i) report.runs[i] = run_one(st, st.hs[i], bank);
    return report;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < st.hs.size(); i = next++)
        report.runs[i] = run_one(st, st.hs[i], bank);
    });
  for (auto& t : pool) t.join();
  return report;
}

ConvergenceFit convergence_fit(const std::vector<double>& hs, const std::vector<double>& values) {
  if (hs.size() != values.size()) throw std::invalid_argument("convergence_fit: size mismatch");
  ConvergenceFit fit;
  fit.slope = std::numeric_limits<double>::quiet_NaN();
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) {
    fit.verdict = "identically zero";
    return fit;
  }
  fit.monotone = values.size() >= 2;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(std::abs(values[i]) < std::abs(values[i - 1]))) fit.monotone = false;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = std::abs(values[i]);
    if (!(v > 0.0) || !(hs[i] > 0.0)) continue;
    const double x = std::log(hs[i]), y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n >= 2 && n * sxx - sx * sx > 0.0) fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.verdict = (fit.slope > 0.1) ? "decaying" : "no decay";
  return fit;
}

ConvergenceReport convergence_report(const SweepReport& report) {
  ConvergenceReport out;
  std::vector<double> hs;
  for (const auto& r : report.runs) hs.push_back(r.h);
  auto add = [&](const std::string& name, auto get) {
    std::vector<double> v;
    for (const auto& r : report.runs) v.push_back(get(r));
    out.series.push_back(name);
    out.fits.push_back(convergence_fit(hs, v));
  };
  for (std::size_t j = 0; j < report.test_names.size(); ++j) {
    add("pairing:" + report.test_names[j], [&](const SweepRun& r) {
      return j < r.pairing_integrals.size() ? r.pairing_integrals[j] : 0.0;
    });
    for (int m = 0; m < 2; ++m)
      add("residual:" + report.test_names[j] + ":" + std::to_string(m + 1), [&](const SweepRun& r) {
        const Eigen::ArrayXXd n = r.residual.normalized();
        return Eigen::Index(j) < n.rows() && m < n.cols() ? n(Eigen::Index(j), m) : 0.0;
      });
  }
  add("ut_integral", [](const SweepRun& r) { return r.ut_integral; });
  add("vt_integral", [](const SweepRun& r) { return r.vt_integral; });
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  os << "# rule,h,quantity,name,value\n";
  const std::string rule = to_string(report.rule);
  for (const SweepRun& r : report.runs) {
    const std::string prefix = rule + "," + format_double(r.h) + ",";
    for (std::size_t j = 0; j < r.pairing_integrals.size(); ++j)
      os << prefix << "pairing_integral," << report.test_names[j] << ','
         << format_double(r.pairing_integrals[j]) << '\n';
    const Eigen::ArrayXXd norm = r.residual.normalized();
    for (Eigen::Index j = 0; j < r.residual.entries.rows(); ++j)
      for (Eigen::Index m = 0; m < r.residual.entries.cols(); ++m) {
        const std::string name = r.residual.names[std::size_t(j)] + ":" + std::to_string(m + 1);
        os << prefix << "residual," << name << ',' << format_double(r.residual.entries(j, m)) << '\n';
        os << prefix << "residual_normalized," << name << ',' << format_double(norm(j, m)) << '\n';
      }
    os << prefix << "residual_scale,," << format_double(r.residual.scale) << '\n';
    os << prefix << "ut_integral,," << format_double(r.ut_integral) << '\n';
    os << prefix << "vt_integral,," << format_double(r.vt_integral) << '\n';
    os << prefix << "status,," << (r.ok ? "ok" : "failed") << '\n';
  }
}

void write_pairing_csv(std::ostream& os, const SweepReport& report) {
  os << "# rule,h,time,name,value\n";
  const std::string rule = to_string(report.rule);
  for (const SweepRun& r : report.runs)
    for (std::size_t j = 0; j < r.pairing_series.size(); ++j)
      for (std::size_t i = 0; i < r.pairing_series[j].size() && i < r.times.size(); ++i)
        os << rule << ',' << format_double(r.h) << ',' << format_double(r.times[i]) << ','
           << report.test_names[j] << ',' << format_double(r.pairing_series[j][i]) << '\n';
}

void write_sweep_summary(std::ostream& os, const SweepReport& report) {
  os << "amplitude rule: " << to_string(report.rule) << "\n";
  os << "scaling law: gamma = 1/sqrt(h), L = " << report.law.a << " sqrt(h), A = "
     << report.law.epsilon << " h\n";
  for (const SweepRun& r : report.runs) {
    os << "h = " << r.h << ": " << (r.ok ? "ok" : "FAILED (" + r.failure + ")")
       << ", snapshots " << r.times.size() << ", ut " << r.ut_integral << ", vt " << r.vt_integral
       << "\n";
  }
  const ConvergenceReport conv = convergence_report(report);
  os << "\nseries                          slope     monotone  verdict\n";
  for (std::size_t i = 0; i < conv.series.size(); ++i) {
    os << std::left << std::setw(32) << conv.series[i] << std::setw(10) << std::setprecision(3)
       << conv.fits[i].slope << std::setw(10) << (conv.fits[i].monotone ? "yes" : "no")
       << conv.fits[i].verdict << "\n";
  }
}

}  // namespace llb
