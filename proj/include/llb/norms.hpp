#pragma once

#include "llb/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace llb {

/// Integral over Omega(h) or average over it.
enum class Measure { integral, average };

/// (int |f|^p)^(1/p) or (avg |f|^p)^(1/p) by midpoint quadrature.
/// Vector fields use the pointwise Euclidean norm. Requires p >= 1.
template <typename Derived>
double lp_norm(const FilmGrid& g, const Eigen::ArrayBase<Derived>& f, double p,
               Measure measure = Measure::average) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const auto magnitude = f.square().rowwise().sum().sqrt();
  double sum = 0.0;
  if (p == 2.0)
    sum = magnitude.square().sum();
  else
    sum = magnitude.pow(p).sum();
  sum *= measure == Measure::integral ? g.cell_volume() : 1.0 / double(g.size());
  return std::pow(sum, 1.0 / p);
}

/// Quadrature of int_{Omega(h)} f.
template <typename Derived>
double integrate(const FilmGrid& g, const Eigen::ArrayBase<Derived>& f) {
  return f.sum() * g.cell_volume();
}

/// Quadrature of int_Omega w over the in-plane nodes.
template <typename Derived>
double integrate_planar(const FilmGrid& g, const Eigen::ArrayBase<Derived>& w) {
  return w.sum() * g.cell_area();
}

/// Mean over the nz vertical layers at each in-plane node (midpoint rule).
template <typename Derived>
Eigen::Array<double, Eigen::Dynamic, Derived::ColsAtCompileTime> vertical_average(
    const FilmGrid& g, const Eigen::ArrayBase<Derived>& f) {
  const Eigen::Index plane = g.planar_size();
  Eigen::Array<double, Eigen::Dynamic, Derived::ColsAtCompileTime> out =
      Eigen::Array<double, Eigen::Dynamic, Derived::ColsAtCompileTime>::Zero(plane, f.cols());
  for (int k = 0; k < g.nz; ++k) out += f.middleRows(k * plane, plane);
  return out / double(g.nz);
}

/// Replicate an in-plane field across all layers.
template <typename Derived>
Eigen::Array<double, Eigen::Dynamic, Derived::ColsAtCompileTime> extrude(
    const FilmGrid& g, const Eigen::ArrayBase<Derived>& planar) {
  const Eigen::Index plane = g.planar_size();
  Eigen::Array<double, Eigen::Dynamic, Derived::ColsAtCompileTime> out(g.size(), planar.cols());
  for (int k = 0; k < g.nz; ++k) out.middleRows(k * plane, plane) = planar;
  return out;
}

}  // namespace llb
