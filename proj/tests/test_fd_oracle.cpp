#include "llb/fd_oracle.hpp"
#include "llb/random_field.hpp"
#include "llb/stray_field.hpp"
#include "support.hpp"

using namespace llb;

namespace {

double rel_l2(const VectorField& a, const VectorField& ref) {
  return std::sqrt((a - ref).square().sum() / ref.square().sum());
}

}  // namespace

TEST_CASE("zero field gives zero potential") {
  const FilmGrid g = make_grid(4, 4, 2, 1, 1, 0.2);
  const FdOracleResult r = fd_poisson_oracle(VectorField::Zero(g.size(), 3), g);
  CHECK(r.film_gradient.abs().maxCoeff() == 0.0);
}

TEST_CASE("slab interior gradient within 5 percent") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.2);
  VectorField u = VectorField::Zero(g.size(), 3);
  u.col(2).setOnes();
  const FdOracleResult r = fd_poisson_oracle(u, g);
  CHECK(r.converged);
  CHECK((r.film_gradient.col(2) - 1.0).abs().maxCoeff() < 0.05);
  CHECK(r.film_gradient.leftCols<2>().abs().maxCoeff() < 1e-8);
}

TEST_CASE("smooth random field matches the spectral solver") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.2);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 3; ++trial) {
    const VectorField u = random_smooth_field(g, rng, 0.5);
    const FdOracleResult r = fd_poisson_oracle(u, g);
    CHECK(r.converged);
    CHECK(rel_l2(solve_potential(u, g, 4.0).film_gradient(), r.film_gradient) <= 0.05);
  }
}

TEST_CASE("unknown cap is enforced") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.2);
  FdOracleOptions o;
  o.max_unknowns = 100;
  CHECK_THROWS(fd_poisson_oracle(VectorField::Zero(g.size(), 3), g, o));
}
