#include "llb/plot_data.hpp"

#include "llb/diagnostics.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace llb {

std::vector<PlotSeries> plot_series(const SweepReport& report) {
  std::vector<PlotSeries> out;
  if (report.runs.empty()) return out;

  std::vector<std::string> h_columns;
  std::size_t samples = report.runs.front().times.size();
  for (const SweepRun& r : report.runs) {
    h_columns.push_back("h=" + format_double(r.h));
    samples = std::min(samples, r.times.size());
  }

  for (std::size_t j = 0; j < report.test_names.size(); ++j) {
    const std::string& name = report.test_names[j];
    bool have_series = samples > 0;
    for (const SweepRun& r : report.runs)
      if (j >= r.pairing_series.size() || r.pairing_series[j].size() < samples) have_series = false;
    if (have_series) {
      PlotSeries s{"pairing_" + name, {"time"}, {}};
      s.columns.insert(s.columns.end(), h_columns.begin(), h_columns.end());
      for (std::size_t i = 0; i < samples; ++i) {
        std::vector<double> row{report.runs.front().times[i]};
        for (const SweepRun& r : report.runs) row.push_back(r.pairing_series[j][i]);
        s.rows.push_back(std::move(row));
      }
      out.push_back(std::move(s));
    }

    PlotSeries decay{"decay_pairing_" + name, {"h", "pairing_integral"}, {}};
    for (const SweepRun& r : report.runs)
      if (j < r.pairing_integrals.size()) decay.rows.push_back({r.h, r.pairing_integrals[j]});
    out.push_back(std::move(decay));

    Eigen::Index modes = 0;
    for (const SweepRun& r : report.runs) modes = std::max(modes, r.residual.entries.cols());
    for (Eigen::Index m = 0; m < modes; ++m) {
      PlotSeries res{"decay_residual_" + name + "_" + std::to_string(m + 1), {"h", "residual_normalized"}, {}};
      for (const SweepRun& r : report.runs) {
        const Eigen::ArrayXXd n = r.residual.normalized();
        if (Eigen::Index(j) < n.rows() && m < n.cols()) res.rows.push_back({r.h, n(Eigen::Index(j), m)});
      }
      out.push_back(std::move(res));
    }
  }

  PlotSeries ut{"monitor_ut", {"h", "ut_integral"}, {}};
  PlotSeries vt{"monitor_vt", {"h", "vt_integral"}, {}};
  for (const SweepRun& r : report.runs) {
    ut.rows.push_back({r.h, r.ut_integral});
    vt.rows.push_back({r.h, r.vt_integral});
  }
  out.push_back(std::move(ut));
  out.push_back(std::move(vt));
  return out;
}

std::vector<PlotSeries> plot_series(const Trajectory& tr, const ModelParams& params) {
  std::vector<PlotSeries> out;
  if (tr.records.empty()) return out;
  PlotSeries energy{"energy", {"time", "exchange", "stray", "longitudinal", "total", "dissipation"}, {}};
  for (const DiagnosticsRecord& r : tr.records)
    energy.rows.push_back({r.time, r.energy.exchange, r.energy.stray, r.energy.longitudinal,
                           r.energy.total, r.energy.dissipation});
  const BalanceSeries bal = energy_estimate_monitors(tr.records, params);
  PlotSeries balance{"balance", {"time", "balance_residual", "gradient_residual", "gradient_residual_slack"}, {}};
  for (std::size_t i = 0; i < bal.time.size(); ++i)
    balance.rows.push_back({bal.time[i], bal.balance[i], bal.gradient_raw[i], bal.gradient_slack[i]});
  PlotSeries rates{"monitor_rates", {"time", "ut_norm", "vt_norm"}, {}};
  for (const SimState& s : tr.snapshots) {
    const DiagnosticsRecord& r = tr.records[std::size_t(s.step)];
    rates.rows.push_back({r.time, r.ut_norm, r.vt_norm});
  }
  out.push_back(std::move(energy));
  out.push_back(std::move(balance));
  out.push_back(std::move(rates));
  return out;
}

void write_plot_series(std::ostream& os, const PlotSeries& s) {
  os << '#';
  for (const std::string& c : s.columns) os << ' ' << c;
  os << '\n';
  for (const auto& row : s.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << format_double(row[i]);
    os << '\n';
  }
}

std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& dir,
                                                  const std::vector<PlotSeries>& series) {
  std::vector<std::filesystem::path> paths;
  if (series.empty()) return paths;
  std::filesystem::create_directories(dir);
  for (const PlotSeries& s : series) {
    const std::filesystem::path p = dir / (s.name + ".dat");
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    write_plot_series(f, s);
    paths.push_back(p);
  }
  return paths;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double number(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::runtime_error("line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

template <typename T>
std::size_t index_of(std::vector<T>& list, const T& value) {
  auto it = std::find(list.begin(), list.end(), value);
  if (it != list.end()) return std::size_t(it - list.begin());
  list.push_back(value);
  return list.size() - 1;
}

}  // namespace

SweepReport read_sweep_csv(std::istream& sweep, std::istream* pairing) {
  SweepReport report;
  std::vector<double> hs;
  std::vector<std::vector<std::string>> residual_names;
  std::vector<std::map<std::pair<std::size_t, int>, double>> residual_values;
  bool rule_set = false;

  auto run_for = [&](double h) -> SweepRun& {
    const std::size_t i = index_of(hs, h);
    if (i == report.runs.size()) {
      report.runs.emplace_back();
      report.runs.back().h = h;
      residual_names.emplace_back();
      residual_values.emplace_back();
    }
    return report.runs[i];
  };
  auto set_rule = [&](const std::string& r) {
    const AmplitudeRule rule = parse_amplitude_rule(r);
    if (rule_set && rule != report.rule) throw std::runtime_error("mixed amplitude rules");
    report.rule = rule;
    rule_set = true;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(sweep, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line);
    if (f.size() != 5) throw std::runtime_error("line " + std::to_string(line_no) + ": expected 5 fields");
    set_rule(f[0]);
    const double h = number(f[1], line_no);
    SweepRun& r = run_for(h);
    const std::size_t ri = std::size_t(&r - report.runs.data());
    const std::string& q = f[2];
    if (q == "pairing_integral") {
      const std::size_t j = index_of(report.test_names, f[3]);
      if (r.pairing_integrals.size() <= j) r.pairing_integrals.resize(j + 1, 0.0);
      r.pairing_integrals[j] = number(f[4], line_no);
    } else if (q == "residual") {
      const auto colon = f[3].rfind(':');
      if (colon == std::string::npos) throw std::runtime_error("line " + std::to_string(line_no) + ": bad residual name");
      const std::size_t j = index_of(residual_names[ri], f[3].substr(0, colon));
      const int m = int(number(f[3].substr(colon + 1), line_no)) - 1;
      residual_values[ri][{j, m}] = number(f[4], line_no);
    } else if (q == "residual_scale") {
      r.residual.scale = number(f[4], line_no);
    } else if (q == "ut_integral") {
      r.ut_integral = number(f[4], line_no);
    } else if (q == "vt_integral") {
      r.vt_integral = number(f[4], line_no);
    } else if (q == "status") {
      r.ok = f[4] == "ok";
    } else if (q != "residual_normalized") {
      throw std::runtime_error("line " + std::to_string(line_no) + ": unknown quantity '" + q + "'");
    }
  }

  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    LimitResidual& res = report.runs[i].residual;
    int modes = 0;
    for (const auto& [key, v] : residual_values[i]) modes = std::max(modes, key.second + 1);
    res.names = residual_names[i];
    res.time_modes = modes;
    res.entries = Eigen::ArrayXXd::Zero(Eigen::Index(res.names.size()), modes);
    for (const auto& [key, v] : residual_values[i]) res.entries(Eigen::Index(key.first), key.second) = v;
  }

  if (!pairing) return report;
  line_no = 0;
  while (std::getline(*pairing, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split(line);
    if (f.size() != 5) throw std::runtime_error("pairing line " + std::to_string(line_no) + ": expected 5 fields");
    set_rule(f[0]);
    SweepRun& r = run_for(number(f[1], line_no));
    const double t = number(f[2], line_no);
    const std::size_t j = index_of(report.test_names, f[3]);
    if (r.pairing_series.size() <= j) r.pairing_series.resize(j + 1);
    r.pairing_series[j].push_back(number(f[4], line_no));
    if (j == 0) r.times.push_back(t);
  }
  return report;
}

}  // namespace llb
