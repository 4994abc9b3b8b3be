#pragma once

#include "llb/limit_lab.hpp"
#include "llb/trajectory.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace llb {

/// A whitespace-separated table: a '#' header naming the columns, then rows.
struct PlotSeries {
  std::string name;  ///< file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Per test function: the pairing time series (time by h matrix) and the decay of its
/// time integral over h; per residual entry its decay over h; the u_t and v_t monitors.
/// An empty report yields no series.
std::vector<PlotSeries> plot_series(const SweepReport& report);

/// Energy, dissipation and the balance monitors of one run against time.
std::vector<PlotSeries> plot_series(const Trajectory& trajectory, const ModelParams& params);

void write_plot_series(std::ostream& os, const PlotSeries& series);

/// Writes `<dir>/<name>.dat` for each series and returns the paths in order.
std::vector<std::filesystem::path> emit_plot_data(const std::filesystem::path& dir,
                                                  const std::vector<PlotSeries>& series);

/// Rebuilds a report from the sweep CSV and, when given, the pairing time-series CSV.
/// Throws std::runtime_error on malformed input.
SweepReport read_sweep_csv(std::istream& sweep, std::istream* pairing = nullptr);

}  // namespace llb
