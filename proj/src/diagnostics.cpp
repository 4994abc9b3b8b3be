#include "llb/diagnostics.hpp"

#include "llb/norms.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace llb {

DiagnosticsRecord compute_record(const LlbModel& model, const SimState& s) {
  const FilmGrid& g = model.grid();
  const double dV = g.cell_volume();
  const double vol = g.volume();
  const VectorField lap = model.basis().laplacian(s.u);
  const ScalarField r2 = squared_norm(s.u);

  DiagnosticsRecord r;
  r.step = s.step;
  r.time = s.t;
  r.int_u2 = r2.sum() * dV;
  r.int_u4 = r2.square().sum() * dV;
  r.int_grad_u2 = -(s.u * lap).sum() * dV;
  r.int_lap_u2 = lap.square().sum() * dV;
  r.int_grad_U2 = model.params().stray_field ? s.U.gradient_norm_sq() : 0.0;

  r.avg_u2 = std::sqrt(r.int_u2 / vol);
  r.avg_u4 = std::pow(r.int_u4 / vol, 0.25);
  r.avg_u6 = std::pow(r2.cube().sum() * dV / vol, 1.0 / 6.0);
  r.avg_grad_u2 = std::sqrt(std::max(0.0, r.int_grad_u2) / vol);
  r.avg_lap_u2 = std::sqrt(r.int_lap_u2 / vol);
  r.grad_U2 = std::sqrt(r.int_grad_U2);
  r.grad_v2 = r.grad_U2 / g.h;
  r.energy = model.energy(s.u, s.U);
  return r;
}

PlanarField compute_w1(const VectorField& u, const FilmGrid& grid) {
  const ScalarField f = squared_norm(u) * u.col(2);
  return vertical_average(grid, f) / std::sqrt(grid.h);
}

PlanarField compute_w2(const VectorField& u, const PotentialField& U) {
  const FilmGrid& grid = U.grid;
  const ScalarField f = squared_norm(u) * U.film_gradient().col(2);
  return vertical_average(grid, f) / std::sqrt(grid.h);
}

double pairing(const FilmGrid& grid, const PlanarField& w, const PlanarField& phi) {
  return integrate_planar(grid, w * phi);
}

ProductGap product_average_gap(const SpectralBasis& basis, const ScalarField& f,
                               const ScalarField& g, double p, double q) {
  if (!(p > 1.0) || !(q > 1.0) || std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12)
    throw std::invalid_argument("product_average_gap: p and q must be conjugate exponents");
  const FilmGrid& grid = basis.grid();
  const PlanarField mean_fg = vertical_average(grid, f * g);
  const PlanarField mean_f = vertical_average(grid, f);
  const PlanarField mean_g = vertical_average(grid, g);
  ProductGap out;
  out.lhs = std::abs(integrate_planar(grid, mean_fg - mean_f * mean_g));
  const ScalarField df = basis.vertical_derivative(f);
  out.rhs = grid.h * grid.area() * lp_norm(grid, df, p, Measure::average) *
            lp_norm(grid, g, q, Measure::average);
  return out;
}

ProductGap product_average_gap(const FilmGrid& grid, const ScalarField& f, const ScalarField& g,
                               double p, double q) {
  return product_average_gap(SpectralBasis(grid), f, g, p, q);
}

BalanceSeries energy_estimate_monitors(const std::vector<DiagnosticsRecord>& records,
                                       const ModelParams& params, double slack) {
  BalanceSeries out;
  if (records.empty()) return out;
  const double L = params.L, A = params.A, c = params.inv_chi(), mu = params.mu();
  auto dissipation = [&](const DiagnosticsRecord& r) {
    return 2.0 * L * (A * r.int_grad_u2 + r.int_grad_U2) + 2.0 * L * c * (r.int_u2 + mu * r.int_u4);
  };
  const DiagnosticsRecord& first = records.front();
  double acc_balance = 0.0, acc_lap = 0.0, acc_u2 = 0.0;
  for (std::size_t n = 0; n < records.size(); ++n) {
    const DiagnosticsRecord& r = records[n];
    if (n > 0) {
      const DiagnosticsRecord& prev = records[n - 1];
      const double dt = r.time - prev.time;
      acc_balance += 0.5 * dt * (dissipation(prev) + dissipation(r));
      acc_lap += 0.5 * dt * 2.0 * L * A * (prev.int_lap_u2 + r.int_lap_u2);
      acc_u2 += 0.5 * dt * (prev.int_u2 + r.int_u2);
    }
    out.time.push_back(r.time);
    out.balance.push_back(r.int_u2 + acc_balance - first.int_u2);
    const double raw = r.int_grad_u2 + acc_lap - first.int_grad_u2;
    out.gradient_raw.push_back(raw);
    out.gradient_slack.push_back(raw - slack * acc_u2);
  }
  return out;
}

namespace {

template <typename Density>
RateMonitor rate_monitor(const std::vector<SimState>& snaps, Density&& density) {
  RateMonitor out;
  const std::size_t n = snaps.size();
  for (const SimState& s : snaps) out.time.push_back(s.t);
  out.density.assign(n, 0.0);
  if (n < 2) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    out.density[i] = density(snaps[lo], snaps[hi], snaps[hi].t - snaps[lo].t);
  }
  for (std::size_t i = 1; i < n; ++i)
    out.integral += 0.5 * (out.time[i] - out.time[i - 1]) * (out.density[i] + out.density[i - 1]);
  return out;
}

}  // namespace

RateMonitor ut_monitor(const std::vector<SimState>& snapshots) {
  return rate_monitor(snapshots, [](const SimState& a, const SimState& b, double dt) {
    const FilmGrid& g = a.U.grid;
    const VectorField ut = (b.u - a.u) / dt;
    return std::pow(lp_norm(g, ut, 1.5, Measure::average), 2.0);
  });
}

RateMonitor vt_monitor(const std::vector<SimState>& snapshots) {
  return rate_monitor(snapshots, [](const SimState& a, const SimState& b, double dt) {
    const double h = a.U.grid.h;
    return potential_difference_l2_sq(b.U, a.U) / (h * h * dt * dt);
  });
}

void fill_rate_monitors(Trajectory& tr) {
  const RateMonitor ut = ut_monitor(tr.snapshots);
  const RateMonitor vt = vt_monitor(tr.snapshots);
  for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
    const auto step = std::size_t(tr.snapshots[i].step);
    if (step >= tr.records.size()) continue;
    tr.records[step].ut_norm = ut.density[i];
    tr.records[step].vt_norm = std::sqrt(vt.density[i]);
  }
}

std::vector<PlanarField> angular_velocity(const std::vector<PlanarVectorField>& ubar,
                                          const std::vector<double>& times, double floor) {
  if (ubar.size() != times.size())
    throw std::invalid_argument("angular_velocity: series and times differ in length");
  const std::size_t n = ubar.size();
  std::vector<PlanarField> out;
  if (n == 0) return out;
  const Eigen::Index nodes = ubar.front().rows();
  for (std::size_t i = 0; i < n; ++i) out.push_back(PlanarField::Zero(nodes));
  if (n < 2) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? i : i + 1;
    const double dt = times[hi] - times[lo];
    for (Eigen::Index x = 0; x < nodes; ++x) {
      const double r_lo = ubar[lo].row(x).matrix().norm();
      const double r_hi = ubar[hi].row(x).matrix().norm();
      const double r_i = ubar[i].row(x).matrix().norm();
      if (r_lo < floor || r_hi < floor || r_i < floor) continue;
      const Eigen::Array2d e_lo = ubar[lo].row(x).transpose() / r_lo;
      const Eigen::Array2d e_hi = ubar[hi].row(x).transpose() / r_hi;
      const Eigen::Array2d e = ubar[i].row(x).transpose() / r_i;
      const Eigen::Array2d de = (e_hi - e_lo) / dt;
      out[i](x) = e(0) * de(1) - e(1) * de(0);
    }
  }
  return out;
}

std::vector<TestFunction> default_test_bank(const FilmGrid& g) {
  using std::numbers::pi;
  const double lx = g.lx, ly = g.ly;
  auto fn = [&](std::string name, auto f) {
    return TestFunction{std::move(name), sample_planar(g, [&](double x, double y) {
                          return f(x / lx, y / ly);
                        })};
  };
  auto bump = [](double cx, double cy, double radius) {
    return [=](double x, double y) {
      double dx = std::remainder(x - cx, 1.0), dy = std::remainder(y - cy, 1.0);
      const double rho2 = (dx * dx + dy * dy) / (radius * radius);
      return rho2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - rho2)) : 0.0;
    };
  };
  std::vector<TestFunction> bank;
  bank.push_back(fn("one", [](double, double) { return 1.0; }));
  bank.push_back(fn("cos_x", [](double x, double) { return std::cos(2 * pi * x); }));
  bank.push_back(fn("sin_x", [](double x, double) { return std::sin(2 * pi * x); }));
  bank.push_back(fn("cos_y", [](double, double y) { return std::cos(2 * pi * y); }));
  bank.push_back(fn("sin_y", [](double, double y) { return std::sin(2 * pi * y); }));
  bank.push_back(
      fn("cos_x_cos_y", [](double x, double y) { return std::cos(2 * pi * x) * std::cos(2 * pi * y); }));
  bank.push_back(fn("sin_xy", [](double x, double y) { return std::sin(2 * pi * (x + y)); }));
  bank.push_back(fn("bump_a", bump(0.3, 0.4, 0.3)));
  bank.push_back(fn("bump_b", bump(0.7, 0.65, 0.25)));
  return bank;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_diagnostics_csv(std::ostream& os, const Trajectory& tr, const ModelParams& params) {
  const BalanceSeries bal = energy_estimate_monitors(tr.records, params);
  os << "# step,time,u_l2,u_l4,u_l6,grad_u_l2,lap_u_l2,grad_U_l2,grad_v_l2,"
        "energy_exchange,energy_stray,energy_longitudinal,energy_total,dissipation,"
        "balance_residual,gradient_residual,gradient_residual_slack,ut_norm,vt_norm\n";
  for (const SimState& s : tr.snapshots) {
    const auto n = std::size_t(s.step);
    if (n >= tr.records.size()) continue;
    const DiagnosticsRecord& r = tr.records[n];
    const double cols[] = {r.time,
                           r.avg_u2,
                           r.avg_u4,
                           r.avg_u6,
                           r.avg_grad_u2,
                           r.avg_lap_u2,
                           r.grad_U2,
                           r.grad_v2,
                           r.energy.exchange,
                           r.energy.stray,
                           r.energy.longitudinal,
                           r.energy.total,
                           r.energy.dissipation,
                           bal.balance[n],
                           bal.gradient_raw[n],
                           bal.gradient_slack[n],
                           r.ut_norm,
                           r.vt_norm};
    os << r.step;
    for (double c : cols) os << ',' << format_double(c);
    os << '\n';
  }
}

}  // namespace llb
