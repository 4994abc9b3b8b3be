#include "llb/config.hpp"

#include "llb/diagnostics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace llb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_double(const std::string& v) {
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) return std::nullopt;
  return out;
}

template <typename Int>
std::optional<Int> to_int(const std::string& v) {
  Int out{};
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) return std::nullopt;
  return out;
}

std::optional<bool> to_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  return std::nullopt;
}

std::optional<std::vector<double>> to_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto d = to_double(trim(item));
    if (!d) return std::nullopt;
    out.push_back(*d);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_double(xs[i]);
  return out;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

/// Returns an error message on a malformed value.
using Setter = std::function<std::optional<std::string>(RunConfig&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
  Setter set;
  Getter get;
};

Setter real(double RunConfig::*field) {
  return [field](RunConfig& c, const std::string& v) -> std::optional<std::string> {
    auto d = to_double(v);
    if (!d) return "expected a number, got '" + v + "'";
    c.*field = *d;
    return std::nullopt;
  };
}

template <typename F>
Setter real_with(F assign) {
  return [assign](RunConfig& c, const std::string& v) -> std::optional<std::string> {
    auto d = to_double(v);
    if (!d) return "expected a number, got '" + v + "'";
    assign(c, *d);
    return std::nullopt;
  };
}

template <typename F>
Setter integer_with(F assign) {
  return [assign](RunConfig& c, const std::string& v) -> std::optional<std::string> {
    auto i = to_int<long>(v);
    if (!i) return "expected an integer, got '" + v + "'";
    assign(c, *i);
    return std::nullopt;
  };
}

template <typename F>
Setter boolean_with(F assign) {
  return [assign](RunConfig& c, const std::string& v) -> std::optional<std::string> {
    auto b = to_bool(v);
    if (!b) return "expected true or false, got '" + v + "'";
    assign(c, *b);
    return std::nullopt;
  };
}

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> table = [] {
    std::map<std::string, Key> k;
    auto fmt = [](double v) { return format_double(v); };

    k["grid.nx"] = {integer_with([](RunConfig& c, long v) { c.nx = int(v); }),
                    [](const RunConfig& c) { return std::to_string(c.nx); }};
    k["grid.ny"] = {integer_with([](RunConfig& c, long v) { c.ny = int(v); }),
                    [](const RunConfig& c) { return std::to_string(c.ny); }};
    k["grid.nz"] = {integer_with([](RunConfig& c, long v) { c.nz = int(v); }),
                    [](const RunConfig& c) { return std::to_string(c.nz); }};
    k["grid.lx"] = {real(&RunConfig::lx), [fmt](const RunConfig& c) { return fmt(c.lx); }};
    k["grid.ly"] = {real(&RunConfig::ly), [fmt](const RunConfig& c) { return fmt(c.ly); }};
    k["grid.h"] = {real(&RunConfig::h), [fmt](const RunConfig& c) { return fmt(c.h); }};
    k["grid.hs"] = {[](RunConfig& c, const std::string& v) -> std::optional<std::string> {
                      auto l = to_list(v);
                      if (!l) return "expected a comma-separated list of numbers, got '" + v + "'";
                      c.hs = *l;
                      return std::nullopt;
                    },
                    [](const RunConfig& c) { return join(c.hs); }};

    k["params.gamma"] = {real_with([](RunConfig& c, double v) { c.params.gamma = v; }),
                         [fmt](const RunConfig& c) { return fmt(c.params.gamma); }};
    k["params.L"] = {real_with([](RunConfig& c, double v) { c.params.L = v; }),
                     [fmt](const RunConfig& c) { return fmt(c.params.L); }};
    k["params.A"] = {real_with([](RunConfig& c, double v) { c.params.A = v; }),
                     [fmt](const RunConfig& c) { return fmt(c.params.A); }};
    k["law.a"] = {real_with([](RunConfig& c, double v) { c.law.a = v; }),
                  [fmt](const RunConfig& c) { return fmt(c.law.a); }};
    k["law.epsilon"] = {real_with([](RunConfig& c, double v) { c.law.epsilon = v; }),
                        [fmt](const RunConfig& c) { return fmt(c.law.epsilon); }};

    k["material.chi11"] = {real_with([](RunConfig& c, double v) { c.params.chi11 = v; }),
                           [fmt](const RunConfig& c) { return fmt(c.params.chi11); }};
    k["material.T"] = {real_with([](RunConfig& c, double v) { c.params.T = v; }),
                       [fmt](const RunConfig& c) { return fmt(c.params.T); }};
    k["material.Tc"] = {real_with([](RunConfig& c, double v) { c.params.Tc = v; }),
                        [fmt](const RunConfig& c) { return fmt(c.params.Tc); }};
    k["material.stray_field"] = {boolean_with([](RunConfig& c, bool v) { c.params.stray_field = v; }),
                                 [](const RunConfig& c) { return bool_str(c.params.stray_field); }};

    k["sim.dt"] = {real_with([](RunConfig& c, double v) { c.sim.dt = v; }),
                   [fmt](const RunConfig& c) { return fmt(c.sim.dt); }};
    k["sim.t_end"] = {real_with([](RunConfig& c, double v) { c.sim.t_end = v; }),
                      [fmt](const RunConfig& c) { return fmt(c.sim.t_end); }};
    k["sim.scheme"] = {[](RunConfig& c, const std::string& v) -> std::optional<std::string> {
                         try {
                           c.sim.scheme = parse_scheme(v);
                         } catch (const std::exception&) {
                           return "expected rk4 or semi-implicit, got '" + v + "'";
                         }
                         return std::nullopt;
                       },
                       [](const RunConfig& c) { return to_string(c.sim.scheme); }};
    k["sim.galerkin_n"] = {[](RunConfig& c, const std::string& v) -> std::optional<std::string> {
                             if (v == "none") {
                               c.sim.galerkin_n.reset();
                               return std::nullopt;
                             }
                             auto i = to_int<long>(v);
                             if (!i) return "expected an integer or none, got '" + v + "'";
                             c.sim.galerkin_n = *i;
                             return std::nullopt;
                           },
                           [](const RunConfig& c) {
                             return c.sim.galerkin_n ? std::to_string(*c.sim.galerkin_n)
                                                     : std::string("none");
                           }};
    k["sim.dealias"] = {boolean_with([](RunConfig& c, bool v) { c.sim.dealias = v; }),
                        [](const RunConfig& c) { return bool_str(c.sim.dealias); }};
    k["sim.cadence"] = {integer_with([](RunConfig& c, long v) { c.sim.cadence = int(v); }),
                        [](const RunConfig& c) { return std::to_string(c.sim.cadence); }};
    k["sim.stability_c"] = {real_with([](RunConfig& c, double v) { c.sim.stability_c = v; }),
                            [fmt](const RunConfig& c) { return fmt(c.sim.stability_c); }};
    k["sim.padding"] = {real(&RunConfig::padding), [fmt](const RunConfig& c) { return fmt(c.padding); }};

    k["init.profile"] = {[](RunConfig& c, const std::string& v) -> std::optional<std::string> {
                           if (v != "default" && v != "uniform-x" && v != "zero")
                             return "expected default, uniform-x or zero, got '" + v + "'";
                           c.profile = v;
                           return std::nullopt;
                         },
                         [](const RunConfig& c) { return c.profile; }};
    k["init.amplitude_rule"] = {[](RunConfig& c, const std::string& v) -> std::optional<std::string> {
                                  try {
                                    c.rule = parse_amplitude_rule(v);
                                  } catch (const std::exception&) {
                                    return "expected paper or unit, got '" + v + "'";
                                  }
                                  return std::nullopt;
                                },
                                [](const RunConfig& c) { return to_string(c.rule); }};

    k["io.out"] = {[](RunConfig& c, const std::string& v) -> std::optional<std::string> {
                     if (v.empty()) return "expected a path";
                     c.out = v;
                     return std::nullopt;
                   },
                   [](const RunConfig& c) { return c.out; }};
    k["seed"] = {[](RunConfig& c, const std::string& v) -> std::optional<std::string> {
                   auto s = to_int<std::uint64_t>(v);
                   if (!s) return "expected a non-negative integer, got '" + v + "'";
                   c.seed = *s;
                   return std::nullopt;
                 },
                 [](const RunConfig& c) { return std::to_string(c.seed); }};
    return k;
  }();
  return table;
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

void validate(const RunConfig& c, const std::map<std::string, int>& lines,
              std::vector<ConfigError>& errors) {
  auto line_of = [&](const std::string& key) {
    auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  };
  auto require = [&](bool ok, const std::string& key, const std::string& what) {
    if (!ok) errors.push_back({line_of(key), key + ": " + what});
  };
  require(c.nx >= 2, "grid.nx", "must be >= 2");
  require(c.ny >= 2, "grid.ny", "must be >= 2");
  require(c.nz >= 2, "grid.nz", "must be >= 2");
  require(std::isfinite(c.lx) && c.lx > 0.0, "grid.lx", "must be finite and > 0");
  require(std::isfinite(c.ly) && c.ly > 0.0, "grid.ly", "must be finite and > 0");
  require(std::isfinite(c.h) && c.h > 0.0, "grid.h", "must be finite and > 0");
  bool hs_ok = !c.hs.empty();
  for (std::size_t i = 0; i < c.hs.size(); ++i) {
    if (!(std::isfinite(c.hs[i]) && c.hs[i] > 0.0)) hs_ok = false;
    if (i > 0 && !(c.hs[i] < c.hs[i - 1])) hs_ok = false;
  }
  require(hs_ok, "grid.hs", "must be positive and strictly decreasing");

  if (c.source == ParamSource::explicit_params) {
    require(std::isfinite(c.params.gamma) && c.params.gamma >= 0.0, "params.gamma", "must be >= 0");
    require(std::isfinite(c.params.L) && c.params.L > 0.0, "params.L", "must be > 0");
    require(std::isfinite(c.params.A) && c.params.A >= 0.0, "params.A", "must be >= 0");
  } else {
    require(std::isfinite(c.law.a) && c.law.a > 0.0, "law.a", "must be > 0");
    require(std::isfinite(c.law.epsilon) && c.law.epsilon > 0.0, "law.epsilon", "must be > 0");
  }
  require(c.params.chi11 > 0.0, "material.chi11", "must be > 0");
  require(std::isfinite(c.params.T) && std::isfinite(c.params.Tc) && c.params.T > c.params.Tc,
          "material.T", "must exceed material.Tc");

  require(std::isfinite(c.sim.dt) && c.sim.dt > 0.0, "sim.dt", "must be > 0");
  require(std::isfinite(c.sim.t_end) && c.sim.t_end >= 0.0, "sim.t_end", "must be >= 0");
  require(c.sim.cadence >= 1, "sim.cadence", "must be >= 1");
  require(!c.sim.galerkin_n || *c.sim.galerkin_n >= 1, "sim.galerkin_n", "must be >= 1 or none");
  require(std::isfinite(c.sim.stability_c) && c.sim.stability_c > 0.0, "sim.stability_c", "must be > 0");
  require(std::isfinite(c.padding) && c.padding >= 1.0, "sim.padding", "must be >= 1");
}

}  // namespace

FilmGrid RunConfig::grid() const { return grid(h); }

FilmGrid RunConfig::grid(double thickness) const { return make_grid(nx, ny, nz, lx, ly, thickness); }

ModelParams RunConfig::model_params(double thickness) const {
  return source == ParamSource::scaling_law ? scaled_params(thickness, law, params) : params;
}

StrayOptions RunConfig::stray_options() const {
  StrayOptions o;
  o.padding = padding;
  return o;
}

VectorField RunConfig::initial_data(const FilmGrid& g) const {
  return scaled_initial_data(g, make_profile(profile, g, seed), rule);
}

SweepSettings RunConfig::sweep_settings(int threads) const {
  SweepSettings s;
  s.hs = hs;
  s.nx = nx;
  s.ny = ny;
  s.nz = nz;
  s.lx = lx;
  s.ly = ly;
  s.law = law;
  s.base = params;
  s.sim = sim;
  s.padding = padding;
  s.rule = rule;
  s.profile = profile;
  s.seed = seed;
  s.threads = threads;
  return s;
}

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  RunConfig& c = result.config;
  std::map<std::string, int> lines;
  int first_params = 0, first_law = 0;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      result.errors.push_back({line_no, "expected key=value, got '" + line + "'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = keys().find(key);
    if (it == keys().end()) {
      result.errors.push_back({line_no, "unknown key '" + key + "'"});
      continue;
    }
    if (lines.count(key)) {
      result.errors.push_back(
          {line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(lines[key]) + ")"});
      continue;
    }
    lines[key] = line_no;
    if (starts_with(key, "params.") && !first_params) first_params = line_no;
    if (starts_with(key, "law.") && !first_law) first_law = line_no;
    if (auto err = it->second.set(c, value)) result.errors.push_back({line_no, key + ": " + *err});
  }

  if (first_params && first_law) {
    result.errors.push_back({std::max(first_params, first_law),
                             "params.* and law.* are mutually exclusive (params on line " +
                                 std::to_string(first_params) + ", law on line " +
                                 std::to_string(first_law) + ")"});
  }
  c.source = first_law ? ParamSource::scaling_law : ParamSource::explicit_params;
  validate(c, lines, result.errors);
  std::stable_sort(result.errors.begin(), result.errors.end(),
                   [](const ConfigError& a, const ConfigError& b) { return a.line < b.line; });
  return result;
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  for (const auto& [key, k] : keys()) {
    if (c.source == ParamSource::scaling_law && starts_with(key, "params.")) continue;
    if (c.source == ParamSource::explicit_params && starts_with(key, "law.")) continue;
    out += key + "=" + k.get(c) + "\n";
  }
  return out;
}

std::string to_string(const ConfigError& e) {
  return e.line > 0 ? "line " + std::to_string(e.line) + ": " + e.message : e.message;
}

namespace {

std::string join_errors(const std::vector<ConfigError>& errors) {
  std::string out = "invalid configuration";
  for (const ConfigError& e : errors) out += "\n  " + to_string(e);
  return out;
}

}  // namespace

ConfigException::ConfigException(std::vector<ConfigError> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigException({{0, "cannot read '" + path + "'"}});
  std::stringstream ss;
  ss << in.rdbuf();
  ParseResult r = parse_config(ss.str());
  if (!r.ok()) throw ConfigException(std::move(r.errors));
  return r.config;
}

}  // namespace llb
