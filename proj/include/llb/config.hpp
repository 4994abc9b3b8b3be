#pragma once

#include "llb/integrator.hpp"
#include "llb/limit_lab.hpp"
#include "llb/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace llb {

/// Where the model coefficients come from: explicit params.* keys or a scaling law.
enum class ParamSource { explicit_params, scaling_law };

struct RunConfig {
  int nx = 16, ny = 16, nz = 4;
  double lx = 1.0, ly = 1.0;
  double h = 0.1;
  std::vector<double> hs{0.2, 0.1, 0.05, 0.025};

  ParamSource source = ParamSource::explicit_params;
  ModelParams params;  ///< gamma, L, A used only with explicit params
  ScalingLaw law;

  SimConfig sim;
  double padding = 4.0;

  std::string profile = "default";
  AmplitudeRule rule = AmplitudeRule::unit;

  std::string out = "out";
  std::uint64_t seed = 1;

  FilmGrid grid() const;
  FilmGrid grid(double thickness) const;
  /// Explicit params, or the scaling law evaluated at `thickness`.
  ModelParams model_params(double thickness) const;
  StrayOptions stray_options() const;
  VectorField initial_data(const FilmGrid& grid) const;
  SweepSettings sweep_settings(int threads) const;

  bool operator==(const RunConfig&) const = default;
};

struct ConfigError {
  int line = 0;  ///< 0 when the error is not tied to a line
  std::string message;
};

struct ParseResult {
  RunConfig config;
  std::vector<ConfigError> errors;
  bool ok() const { return errors.empty(); }
};

/// Flat `section.key = value` lines; blank lines and lines starting with '#' are
/// ignored. Every error is reported, not only the first.
ParseResult parse_config(const std::string& text);

/// Canonical form: every key, sorted, one per line.
std::string serialize_config(const RunConfig& config);

class ConfigException : public std::runtime_error {
 public:
  explicit ConfigException(std::vector<ConfigError> errors);
  const std::vector<ConfigError>& errors() const { return errors_; }

 private:
  std::vector<ConfigError> errors_;
};

/// Reads and parses a file; throws ConfigException on any error.
RunConfig load_config(const std::string& path);

std::string to_string(const ConfigError& e);

}  // namespace llb
