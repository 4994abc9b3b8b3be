#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>

namespace llb {

// Field storage. Node index is x-fastest: i + nx * (j + ny * k).
// Vector fields keep one contiguous column per component.
template <typename Scalar>
using ScalarFieldT = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using VectorFieldT = Eigen::Array<Scalar, Eigen::Dynamic, 3>;
template <typename Scalar>
using PlanarVectorFieldT = Eigen::Array<Scalar, Eigen::Dynamic, 2>;

using ScalarField = ScalarFieldT<double>;
using VectorField = VectorFieldT<double>;
/// Scalar on the nx*ny in-plane nodes.
using PlanarField = ScalarFieldT<double>;
using PlanarVectorField = PlanarVectorFieldT<double>;
/// Three components on the in-plane nodes (film profiles).
using PlanarVector3Field = VectorFieldT<double>;

/// Discretization of the film Omega x (0, h).
///
/// In-plane directions are periodic with nodes at x_i = i * dx. The vertical
/// direction is open; its nodes sit at the cell midpoints (k + 1/2) * dz.
struct FilmGrid {
  int nx = 2;
  int ny = 2;
  int nz = 2;
  double lx = 1.0;
  double ly = 1.0;
  double h = 1.0;

  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  double dz() const { return h / nz; }
  double cell_volume() const { return dx() * dy() * dz(); }
  double cell_area() const { return dx() * dy(); }
  double area() const { return lx * ly; }
  double volume() const { return area() * h; }

  Eigen::Index size() const { return Eigen::Index(nx) * ny * nz; }
  Eigen::Index planar_size() const { return Eigen::Index(nx) * ny; }
  Eigen::Index index(int i, int j, int k) const {
    return i + Eigen::Index(nx) * (j + Eigen::Index(ny) * k);
  }
  Eigen::Index planar_index(int i, int j) const { return i + Eigen::Index(nx) * j; }

  double x(int i) const { return i * dx(); }
  double y(int j) const { return j * dy(); }
  double z(int k) const { return (k + 0.5) * dz(); }

  double min_spacing() const { return std::fmin(dx(), std::fmin(dy(), dz())); }

  bool operator==(const FilmGrid&) const = default;
};

/// Throws std::invalid_argument when a count is below 2 or a length is not positive.
FilmGrid make_grid(int nx, int ny, int nz, double lx = 1.0, double ly = 1.0, double h = 1.0);

/// Same in-plane layout, different thickness.
FilmGrid with_thickness(const FilmGrid& grid, double h);

template <typename F>
ScalarField sample(const FilmGrid& g, F&& f) {
  ScalarField out(g.size());
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out(g.index(i, j, k)) = f(g.x(i), g.y(j), g.z(k));
  return out;
}

/// `f` returns something indexable with three entries (e.g. Eigen::Vector3d).
template <typename F>
VectorField sample_vector(const FilmGrid& g, F&& f) {
  VectorField out(g.size(), 3);
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const auto v = f(g.x(i), g.y(j), g.z(k));
        const auto n = g.index(i, j, k);
        out(n, 0) = v[0];
        out(n, 1) = v[1];
        out(n, 2) = v[2];
      }
  return out;
}

template <typename F>
PlanarField sample_planar(const FilmGrid& g, F&& f) {
  PlanarField out(g.planar_size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out(g.planar_index(i, j)) = f(g.x(i), g.y(j));
  return out;
}

// Pointwise algebra on vector fields. These accept any Eigen array expression.

template <typename Derived>
auto squared_norm(const Eigen::ArrayBase<Derived>& v) {
  return v.square().rowwise().sum();
}

template <typename DA, typename DB>
VectorField cross(const Eigen::ArrayBase<DA>& a, const Eigen::ArrayBase<DB>& b) {
  VectorField out(a.rows(), 3);
  out.col(0) = a.col(1) * b.col(2) - a.col(2) * b.col(1);
  out.col(1) = a.col(2) * b.col(0) - a.col(0) * b.col(2);
  out.col(2) = a.col(0) * b.col(1) - a.col(1) * b.col(0);
  return out;
}

template <typename DA, typename DB>
ScalarField dot(const Eigen::ArrayBase<DA>& a, const Eigen::ArrayBase<DB>& b) {
  return (a * b).rowwise().sum();
}

/// Planar outer product p ^ q = p1 q2 - p2 q1.
template <typename DA, typename DB>
ScalarField wedge(const Eigen::ArrayBase<DA>& p, const Eigen::ArrayBase<DB>& q) {
  return p.col(0) * q.col(1) - p.col(1) * q.col(0);
}

}  // namespace llb
