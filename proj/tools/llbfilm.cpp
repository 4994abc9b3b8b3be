#include "llb/config.hpp"
#include "llb/diagnostics.hpp"
#include "llb/fd_oracle.hpp"
#include "llb/limit_lab.hpp"
#include "llb/norms.hpp"
#include "llb/plot_data.hpp"
#include "llb/random_field.hpp"
#include "llb/snapshot.hpp"
#include "llb/stray_field.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace llb;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_config = 2;

/// Input or configuration problems detected by the tool itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computation finished but its result is a failure.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

RunConfig resolve(const CommonOptions& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (!o.out.empty()) c.out = o.out;
  if (o.seed) c.seed = *o.seed;
  return c;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "step_%08ld.llb", step);
  return buf;
}

int simulate(const CommonOptions& opt) {
  const RunConfig cfg = resolve(opt);
  const FilmGrid grid = cfg.grid();
  ModelParams params = cfg.model_params(cfg.h);
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  LlbModel model(grid, params, cfg.stray_options(), cfg.sim.dealias);
  const Trajectory tr = run(model, cfg.sim, cfg.initial_data(grid));

  const fs::path out(cfg.out);
  fs::create_directories(out / "snapshots");
  std::ostringstream manifest;
  manifest << "command=simulate\nseed=" << cfg.seed << "\nstatus=" << (tr.ok ? "ok" : "failed")
           << "\nconfig=config.cfg\ndiagnostics=diagnostics.csv\nplot=plot\n";
  for (const SimState& s : tr.snapshots) {
    const std::string name = "snapshots/" + snapshot_name(s.step);
    write_snapshot(out / name, grid, s.u);
    manifest << "snapshot=" << s.step << ',' << format_double(s.t) << ',' << name << '\n';
  }
  write_text(out / "config.cfg", serialize_config(cfg));
  std::ostringstream csv;
  write_diagnostics_csv(csv, tr, params);
  write_text(out / "diagnostics.csv", csv.str());
  emit_plot_data(out / "plot", plot_series(tr, params));
  write_text(out / "manifest.txt", manifest.str());

  std::cout << "simulate: " << tr.snapshots.size() << " snapshots, " << tr.records.size()
            << " records, final energy " << tr.records.back().energy.total << "\n";
  if (!tr.ok) throw NumericalFailure(tr.failure);
  return exit_ok;
}

int sweep(const CommonOptions& opt) {
  const RunConfig cfg = resolve(opt);
  if (cfg.source != ParamSource::scaling_law)
    throw UsageError("sweep needs a scaling law (law.* keys), not explicit params.*");
  const SweepReport report = run_sweep(cfg.sweep_settings(opt.threads));

  const fs::path out(cfg.out);
  fs::create_directories(out);
  std::ostringstream csv, pairing, summary;
  write_sweep_csv(csv, report);
  write_pairing_csv(pairing, report);
  write_sweep_summary(summary, report);
  write_text(out / "sweep.csv", csv.str());
  write_text(out / "pairing_series.csv", pairing.str());
  write_text(out / "summary.txt", summary.str());
  write_text(out / "config.cfg", serialize_config(cfg));

  bool ok = true;
  for (const SweepRun& r : report.runs) ok = ok && r.ok;
  write_text(out / "manifest.txt", "command=sweep\nseed=" + std::to_string(cfg.seed) +
                                       "\nthreads=" + std::to_string(opt.threads) +
                                       "\nstatus=" + (ok ? "ok" : "failed") +
                                       "\nconfig=config.cfg\ncsv=sweep.csv\npairing=pairing_series.csv"
                                       "\nsummary=summary.txt\n");
  std::cout << summary.str();
  if (!ok) throw NumericalFailure("at least one sweep run failed");
  return exit_ok;
}

int check_inequalities(const CommonOptions& opt, int count) {
  const RunConfig cfg = resolve(opt);
  const FilmGrid grid = cfg.grid();
  const SpectralBasis basis(grid);
  StraySolver solver(grid, cfg.stray_options());
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> decay(0.0, 1.0);

  int stray_violations = 0;
  double worst_ratio = 0.0;
  for (int i = 0; i < count; ++i) {
    const VectorField u = random_smooth_field(grid, rng, decay(rng));
    const LpBoundCheck c = check_lp_bound(u, solver.solve(u), 2.0);
    worst_ratio = std::max(worst_ratio, c.ratio);
    if (c.defined && c.ratio > 1.0 + 1e-8) ++stray_violations;
  }

  const std::pair<double, double> exponents[] = {{2.0, 2.0}, {3.0, 1.5}, {6.0, 1.2}};
  int gap_violations = 0;
  double worst_gap = 0.0;
  for (int i = 0; i < count; ++i) {
    const ScalarField f = random_smooth_scalar(grid, rng, decay(rng));
    const ScalarField g = random_smooth_scalar(grid, rng, decay(rng));
    for (const auto& [p, q] : exponents) {
      const ProductGap gap = product_average_gap(basis, f, g, p, q);
      if (gap.rhs > 0.0) worst_gap = std::max(worst_gap, gap.lhs / gap.rhs);
      if (!gap.holds(1e-10)) ++gap_violations;
    }
  }

  std::cout << "stray p=2 bound:  " << count << " fields, worst ratio " << format_double(worst_ratio)
            << ", violations " << stray_violations << "\n"
            << "product average:  " << count << " pairs x 3 exponent pairs, worst lhs/rhs "
            << format_double(worst_gap) << ", violations " << gap_violations << "\n";
  if (stray_violations + gap_violations > 0) throw NumericalFailure("inequality violations found");
  return exit_ok;
}

int stray_oracle(const CommonOptions& opt, const std::string& field) {
  const RunConfig cfg = resolve(opt);
  const FilmGrid grid = cfg.grid();
  VectorField u;
  if (field == "slab") {
    u = VectorField::Zero(grid.size(), 3);
    u.col(2).setOnes();
  } else if (field == "smooth") {
    std::mt19937_64 rng(cfg.seed);
    u = random_smooth_field(grid, rng, 0.5);
  } else if (field == "profile") {
    u = cfg.initial_data(grid);
  } else {
    throw UsageError("unknown field '" + field + "' (slab, smooth, profile)");
  }

  const PotentialField U = solve_potential(u, grid, cfg.padding);
  const FdOracleResult fd = fd_poisson_oracle(u, grid);
  const VectorField spectral = U.film_gradient();
  const double dV = grid.cell_volume();
  const double u_norm = std::sqrt(u.square().sum() * dV);

  std::cout << "grid " << grid.nx << "x" << grid.ny << "x" << grid.nz << ", h " << grid.h
            << ", field " << field << ", oracle unknowns " << fd.unknowns << ", iterations "
            << fd.iterations << "\n";
  std::cout << "component  spectral_l2            oracle_l2              relative_error\n";
  const char* names[] = {"dU/dx1", "dU/dx2", "dU/dx3"};
  const double a = std::sqrt(spectral.square().sum() * dV);
  const double b = std::sqrt(fd.film_gradient.square().sum() * dV);
  const double e = std::sqrt((spectral - fd.film_gradient).square().sum() * dV);
  auto row = [&](const char* name, double sa, double sb, double se) {
    const std::string rel = sb > 1e-9 * b ? format_double(se / sb) : "n/a";
    std::printf("%-10s %-22s %-22s %s\n", name, format_double(sa).c_str(), format_double(sb).c_str(), rel.c_str());
  };
  for (int c = 0; c < 3; ++c)
    row(names[c], std::sqrt(spectral.col(c).square().sum() * dV),
        std::sqrt(fd.film_gradient.col(c).square().sum() * dV),
        std::sqrt((spectral.col(c) - fd.film_gradient.col(c)).square().sum() * dV));
  row("total", a, b, e);
  if (u_norm > 0.0)
    std::cout << "film ratio |grad U|/|u|: spectral " << format_double(a / u_norm) << ", oracle "
              << format_double(b / u_norm) << "\n";
  if (!fd.converged) throw NumericalFailure("finite-difference oracle did not converge");
  return exit_ok;
}

struct ManifestSnapshot {
  long step;
  double time;
  std::string file;
};

std::vector<ManifestSnapshot> read_manifest_snapshots(const fs::path& dir) {
  std::ifstream in(dir / "manifest.txt");
  if (!in) throw UsageError("no manifest.txt in " + dir.string());
  std::vector<ManifestSnapshot> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("snapshot=", 0) != 0) continue;
    std::stringstream ss(line.substr(9));
    std::string step, time, file;
    std::getline(ss, step, ',');
    std::getline(ss, time, ',');
    std::getline(ss, file);
    out.push_back({std::stol(step), std::stod(time), file});
  }
  return out;
}

int limit_residual_cmd(const CommonOptions& opt, const std::string& input) {
  const fs::path dir(input);
  CommonOptions local = opt;
  if (local.config.empty()) local.config = (dir / "config.cfg").string();
  const RunConfig cfg = resolve(local);
  const auto snaps = read_manifest_snapshots(dir);
  if (snaps.size() < 3) throw UsageError("limit-residual needs at least three snapshots");

  std::vector<PlanarVectorField> ubar;
  std::vector<double> times;
  FilmGrid grid;
  for (const ManifestSnapshot& s : snaps) {
    const FieldSnapshot f = read_snapshot(dir / s.file);
    grid = f.grid;
    ubar.push_back(planar_mean(grid, f.values));
    times.push_back(s.time);
  }
  ScalingLaw law = cfg.law;
  if (cfg.source == ParamSource::explicit_params) law.epsilon = cfg.params.A / grid.h;
  LimitResidual res;
  try {
    res = limit_residual(grid, ubar, times, law, default_test_bank(grid));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::ostringstream csv;
  csv << "# name,mode,entry,normalized\n";
  const Eigen::ArrayXXd n = res.normalized();
  for (Eigen::Index j = 0; j < res.entries.rows(); ++j)
    for (Eigen::Index m = 0; m < res.entries.cols(); ++m)
      csv << res.names[std::size_t(j)] << ',' << m + 1 << ',' << format_double(res.entries(j, m)) << ','
          << format_double(n(j, m)) << '\n';
  std::cout << "scale " << format_double(res.scale) << "\n" << csv.str();
  if (!opt.out.empty()) {
    fs::create_directories(opt.out);
    write_text(fs::path(opt.out) / "limit_residual.csv", csv.str());
  }
  return exit_ok;
}

int emit_plot_data_cmd(const CommonOptions& opt, const std::string& input) {
  const fs::path dir(input);
  std::ifstream sweep(dir / "sweep.csv");
  if (!sweep) throw UsageError("no sweep.csv in " + dir.string());
  std::ifstream pairing(dir / "pairing_series.csv");
  SweepReport report;
  try {
    report = read_sweep_csv(sweep, pairing ? &pairing : nullptr);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const fs::path out = opt.out.empty() ? dir / "plot" : fs::path(opt.out);
  const auto paths = emit_plot_data(out, plot_series(report));
  for (const auto& p : paths) std::cout << p.string() << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LLB thin-film pseudo-spectral simulator"};
  app.require_subcommand(1);
  CommonOptions opt;
  int count = 200;
  std::string field = "slab", input;

  auto common = [&](CLI::App* sub, bool threads) {
    sub->add_option("--config", opt.config, "configuration file (key=value)");
    sub->add_option("--out", opt.out, "output directory");
    sub->add_option("--seed", opt.seed, "random seed, overrides the configuration");
    if (threads) sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
  };
  auto* sim = app.add_subcommand("simulate", "run one simulation");
  common(sim, false);
  auto* sw = app.add_subcommand("sweep", "thin-film sweep over h");
  common(sw, true);
  auto* ineq = app.add_subcommand("check-inequalities", "stray bound and product-average inequality");
  common(ineq, false);
  ineq->add_option("--count", count, "random samples")->check(CLI::PositiveNumber);
  auto* oracle = app.add_subcommand("stray-oracle", "spectral stray field against the finite-difference oracle");
  common(oracle, false);
  oracle->add_option("--field", field, "slab, smooth or profile");
  auto* lr = app.add_subcommand("limit-residual", "limit-equation residual of a simulate output");
  common(lr, false);
  lr->add_option("--input", input, "simulate output directory")->required();
  auto* plot = app.add_subcommand("emit-plot-data", "plot series from a sweep output");
  common(plot, false);
  plot->add_option("--input", input, "sweep output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (sim->parsed()) return simulate(opt);
    if (sw->parsed()) return sweep(opt);
    if (ineq->parsed()) return check_inequalities(opt, count);
    if (oracle->parsed()) return stray_oracle(opt, field);
    if (lr->parsed()) return limit_residual_cmd(opt, input);
    if (plot->parsed()) return emit_plot_data_cmd(opt, input);
  } catch (const ConfigException& e) {
    std::cerr << e.what() << "\n";
    return exit_config;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const NumericalFailure& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const StabilityError& e) {
    std::cerr << "failure: " << e.what() << " (suggested dt " << e.suggested_dt() << ")\n";
    return exit_numerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_config;
}
