#pragma once

#include "llb/grid.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

namespace test {

inline llb::VectorField white_field(const llb::FilmGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  llb::VectorField u(g.size(), 3);
  for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = d(rng);
  return u;
}

inline llb::ScalarField white_scalar(const llb::FilmGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  llb::ScalarField f(g.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) f(i) = d(rng);
  return f;
}

/// Low-order trigonometric field with random coefficients, independent of the library basis.
inline llb::VectorField trig_field(const llb::FilmGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  double c[3][6];
  for (auto& row : c)
    for (double& v : row) v = d(rng);
  const double pi = 3.14159265358979323846;
  return llb::sample_vector(g, [&](double x, double y, double z) {
    Eigen::Vector3d v;
    for (int k = 0; k < 3; ++k)
      v[k] = c[k][0] + c[k][1] * std::cos(2 * pi * x / g.lx) + c[k][2] * std::sin(2 * pi * y / g.ly) +
             c[k][3] * std::cos(2 * pi * (x / g.lx + y / g.ly)) + c[k][4] * std::cos(pi * z / g.h) +
             c[k][5] * std::sin(2 * pi * x / g.lx) * std::cos(pi * z / g.h);
    return v;
  });
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
  return (a - b).abs().maxCoeff();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("llbfilm_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace test
