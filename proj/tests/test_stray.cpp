#include "llb/norms.hpp"
#include "llb/random_field.hpp"
#include "llb/spectral.hpp"
#include "llb/stray_field.hpp"
#include "support.hpp"

#include <numbers>

using namespace llb;
using std::numbers::pi;

namespace {

VectorField slab(const FilmGrid& g) {
  VectorField u = VectorField::Zero(g.size(), 3);
  u.col(2).setOnes();
  return u;
}

double film_pairing(const VectorField& u, const PotentialField& U) {
  return (u * U.film_gradient()).sum() * U.grid.cell_volume();
}

}  // namespace

TEST_CASE("uniform in-plane magnetization has no stray field") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.2);
  VectorField u = VectorField::Zero(g.size(), 3);
  u.col(0).setOnes();
  const PotentialField U = solve_potential(u, g);
  CHECK(U.gradient.abs().maxCoeff() < 1e-14);
  CHECK(stray_energy(U) < 1e-28);
}

TEST_CASE("uniform u3 slab") {
  for (double h : {0.05, 0.2, 1.0}) {
    const FilmGrid g = make_grid(4, 4, 4, 1.0, 2.0, h);
    const PotentialField U = solve_potential(slab(g), g);
    const VectorField grad = U.film_gradient();
    CHECK(test::max_abs_diff(grad.col(2), ScalarField::Ones(g.size())) < 1e-12);
    CHECK(grad.leftCols<2>().abs().maxCoeff() < 1e-12);
    CHECK(stray_energy(U) == doctest::Approx(0.5 * g.area() * h).epsilon(1e-12));
    CHECK(U.gradient_norm_sq() == doctest::Approx(g.area() * h).epsilon(1e-12));
    const LpBoundCheck c = check_lp_bound(slab(g), U, 2.0);
    CHECK(c.ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("gradient vanishes outside the slab") {
  const FilmGrid g = make_grid(4, 4, 4, 1, 1, 0.1);
  const PotentialField U = solve_potential(slab(g), g);
  const Eigen::Index plane = g.planar_size();
  for (int k = 0; k < U.nz_total; ++k) {
    if (k >= U.pad_cells && k < U.pad_cells + g.nz) continue;
    CHECK(U.gradient.middleRows(k * plane, plane).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("zero field and padding guard") {
  const FilmGrid g = make_grid(4, 4, 2, 1, 1, 0.1);
  const PotentialField U = solve_potential(VectorField::Zero(g.size(), 3), g);
  CHECK(U.potential.abs().maxCoeff() == 0.0);
  CHECK(stray_energy(U) == 0.0);
  CHECK_FALSE(check_lp_bound(VectorField::Zero(g.size(), 3), U, 2.0).defined);
  CHECK_THROWS_AS(solve_potential(slab(g), g, 0.5), std::invalid_argument);
}

TEST_CASE("energy identity on random fields") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.15);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const VectorField u = test::white_field(g, rng);
    const PotentialField U = solve_potential(u, g);
    CHECK(test::rel_err(U.gradient_norm_sq(), film_pairing(u, U)) < 1e-8);
  }
}

TEST_CASE("linearity and quadratic energy") {
  const FilmGrid g = make_grid(8, 6, 4, 1, 1, 0.2);
  std::mt19937_64 rng(9);
  const VectorField a = test::white_field(g, rng), b = test::white_field(g, rng);
  const StraySolver solver(g);
  const VectorField lhs = solver.solve(2.0 * a - 3.0 * b).gradient;
  const VectorField rhs = 2.0 * solver.solve(a).gradient - 3.0 * solver.solve(b).gradient;
  CHECK(test::max_abs_diff(lhs, rhs) < 1e-10 * rhs.abs().maxCoeff());
  CHECK(test::rel_err(stray_energy(solver.solve(2.0 * a)), 4.0 * stray_energy(solver.solve(a))) < 1e-12);
}

TEST_CASE("film_only solve agrees on the film") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.2);
  std::mt19937_64 rng(2);
  const VectorField u = test::white_field(g, rng);
  const StraySolver solver(g);
  const PotentialField full = solver.solve(u), film = solver.solve(u, true);
  CHECK(test::max_abs_diff(full.film_gradient(), film.film_gradient()) < 1e-13);
  CHECK_FALSE(film.complete);
  CHECK_THROWS(film.gradient_norm_sq());
}

TEST_CASE("p = 2 bound on random fields") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.1);
  const StraySolver solver(g);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const VectorField u = trial % 2 ? test::white_field(g, rng) : random_smooth_field(g, rng, 0.3);
    CHECK(check_lp_bound(u, solver.solve(u), 2.0).ratio <= 1.0 + 1e-8);
  }
}

TEST_CASE("divergence-free in-plane field gives ratio 0") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.1);
  const VectorField u = sample_vector(g, [](double, double y, double) {
    return Eigen::Vector3d(std::sin(2 * pi * y), 0.0, 0.0);
  });
  CHECK(check_lp_bound(u, solve_potential(u, g), 2.0).ratio < 1e-12);
}

TEST_CASE("potential L2 norms") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.1);
  std::mt19937_64 rng(4);
  const VectorField u = test::white_field(g, rng);
  const PotentialField U = solve_potential(u, g);
  CHECK(potential_l2_sq(U) > 0.0);
  CHECK(potential_difference_l2_sq(U, U) == 0.0);
  CHECK(test::rel_err(potential_difference_l2_sq(solve_potential(2.0 * u, g), U), potential_l2_sq(U)) < 1e-10);
}

TEST_CASE("surface stray of simple inputs") {
  const FilmGrid g = make_grid(16, 16, 2, 1, 1, 0.1);
  PlanarVectorField uniform(g.planar_size(), 2);
  uniform.col(0).setConstant(0.6);
  uniform.col(1).setConstant(-0.8);
  CHECK(surface_stray(g, uniform).gradient.abs().maxCoeff() < 1e-14);

  PlanarVectorField solenoidal(g.planar_size(), 2);
  solenoidal.col(0) = sample_planar(g, [](double, double y) { return std::cos(2 * pi * y); });
  solenoidal.col(1) = sample_planar(g, [](double x, double) { return std::sin(4 * pi * x); });
  CHECK(surface_stray(g, solenoidal).gradient.abs().maxCoeff() < 1e-13);

  // v = sin(2 pi x)/2 on the surface solves the per-mode jump problem for u = (cos 2 pi x, 0).
  PlanarVectorField mode = PlanarVectorField::Zero(g.planar_size(), 2);
  mode.col(0) = sample_planar(g, [](double x, double) { return std::cos(2 * pi * x); });
  const SurfaceStray s = surface_stray(g, mode);
  CHECK(test::max_abs_diff(s.trace, sample_planar(g, [](double x, double) { return 0.5 * std::sin(2 * pi * x); })) < 1e-13);
  CHECK(test::max_abs_diff(s.gradient.col(0), pi * mode.col(0)) < 1e-12);
  CHECK(s.gradient.col(1).abs().maxCoeff() < 1e-13);
}

TEST_CASE("averaged film gradient approaches the surface prediction") {
  double previous = 1e300;
  for (double h : {0.2, 0.1, 0.05}) {
    const FilmGrid g = make_grid(16, 16, 4, 1, 1, h);
    const VectorField u = sample_vector(g, [](double x, double, double) {
      return Eigen::Vector3d(std::cos(2 * pi * x), 0.0, 0.0);
    });
    const PotentialField U = solve_potential(u, g);
    const PlanarVectorField avg = vertical_average(g, U.film_gradient().leftCols<2>()) / h;
    const PlanarVectorField pred = surface_stray(g, vertical_average(g, u.leftCols<2>())).gradient;
    const double err = (avg - pred).matrix().norm() / pred.matrix().norm();
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 0.2);
}
