#include "llb/fd_oracle.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace llb {
namespace {

// Real trigonometric interpolation from n periodic samples to m points, as an m x n matrix.
Eigen::MatrixXd interpolation_matrix(int n, int m) {
  using std::numbers::pi;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, n);
  const int top = n / 2;
  for (int a = 0; a < m; ++a)
    for (int i = 0; i < n; ++i) {
      const double offset = double(a) / m - double(i) / n;
      double sum = 0.0;
      for (int s = -top; s <= top; ++s) {
        const double weight = (n % 2 == 0 && std::abs(s) == top) ? 0.5 : 1.0;
        sum += weight * std::cos(2.0 * pi * s * offset);
      }
      w(a, i) = sum / n;
    }
  return w;
}

// Cell heights of the padded column, bottom to top, and the index of the first film cell.
std::vector<double> column_heights(const FilmGrid& g, const FdOracleOptions& o, int& film_start) {
  const double dz = g.h / (g.nz * o.refine);
  const double uniform = std::max(0.0, (o.uniform_padding - 1.0) / 2.0) * g.h;
  const double reach = std::max(uniform, (o.box_multiplier - 1.0) / 2.0 * g.h);
  std::vector<double> side;
  double covered = 0.0;
  while (covered < uniform - 1e-12 * g.h) {
    side.push_back(dz);
    covered += dz;
  }
  double size = dz;
  while (covered < reach - 1e-12 * g.h) {
    size *= o.stretch;
    side.push_back(size);
    covered += size;
  }
  std::vector<double> heights(side.rbegin(), side.rend());
  film_start = int(heights.size());
  heights.insert(heights.end(), std::size_t(g.nz) * o.refine, dz);
  heights.insert(heights.end(), side.begin(), side.end());
  return heights;
}

}  // namespace

FdOracleResult fd_poisson_oracle(const VectorField& u, const FilmGrid& grid,
                                 const FdOracleOptions& o) {
  if (u.rows() != grid.size()) throw std::invalid_argument("fd_poisson_oracle: field size mismatch");
  if (o.refine < 1 || !(o.stretch >= 1.0) || !(o.box_multiplier >= 1.0))
    throw std::invalid_argument("fd_poisson_oracle: bad options");

  const int r = o.refine;
  const int NX = grid.nx * r, NY = grid.ny * r;
  const double dx = grid.lx / NX, dy = grid.ly / NY;
  int film_start = 0;
  const std::vector<double> dz = column_heights(grid, o, film_start);
  const int cells = int(dz.size());
  const Eigen::Index plane = Eigen::Index(NX) * NY;
  const Eigen::Index unknowns = plane * (cells - 1);
  if (unknowns > o.max_unknowns)
    throw std::invalid_argument("fd_poisson_oracle: problem exceeds max_unknowns");

  // Source on the fine film cells.
  const Eigen::MatrixXd wx = interpolation_matrix(grid.nx, NX);
  const Eigen::MatrixXd wy = interpolation_matrix(grid.ny, NY);
  std::vector<Eigen::MatrixXd> src(3 * std::size_t(cells), Eigen::MatrixXd::Zero(NX, NY));
  const Eigen::Index coarse_plane = grid.planar_size();
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < grid.nz; ++k) {
      Eigen::Map<const Eigen::MatrixXd> layer(u.col(c).data() + k * coarse_plane, grid.nx, grid.ny);
      const Eigen::MatrixXd fine = wx * layer * wy.transpose();
      for (int s = 0; s < r; ++s) src[std::size_t(c) * cells + film_start + k * r + s] = fine;
    }
  auto source = [&](int c, int cell) -> const Eigen::MatrixXd& {
    return src[std::size_t(c) * cells + cell];
  };

  auto id = [&](int I, int J, int f) {
    return ((I + NX) % NX) + Eigen::Index(NX) * (((J + NY) % NY) + Eigen::Index(NY) * (f - 1));
  };

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(std::size_t(unknowns) * 7);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(unknowns);
  for (int f = 1; f < cells; ++f) {
    const double below = dz[f - 1], above = dz[f];
    const double e = 0.5 * (below + above);
    const Eigen::MatrixXd ax = (below * source(0, f - 1) + above * source(0, f)) / (2.0 * e);
    const Eigen::MatrixXd ay = (below * source(1, f - 1) + above * source(1, f)) / (2.0 * e);
    for (int J = 0; J < NY; ++J)
      for (int I = 0; I < NX; ++I) {
        const Eigen::Index n = id(I, J, f);
        const double cx = e * dy / dx, cy = e * dx / dy;
        const double cu = dx * dy / above, cd = dx * dy / below;
        triplets.emplace_back(n, n, 2 * cx + 2 * cy + cu + cd);
        triplets.emplace_back(n, id(I + 1, J, f), -cx);
        triplets.emplace_back(n, id(I - 1, J, f), -cx);
        triplets.emplace_back(n, id(I, J + 1, f), -cy);
        triplets.emplace_back(n, id(I, J - 1, f), -cy);
        if (f + 1 < cells) triplets.emplace_back(n, id(I, J, f + 1), -cu);
        if (f - 1 > 0) triplets.emplace_back(n, id(I, J, f - 1), -cd);
        b(n) = -(0.5 * e * dy * (ax((I + 1) % NX, J) - ax((I + NX - 1) % NX, J)) +
                 0.5 * e * dx * (ay(I, (J + 1) % NY) - ay(I, (J + NY - 1) % NY)) +
                 dx * dy * (source(2, f)(I, J) - source(2, f - 1)(I, J)));
      }
  }
  Eigen::SparseMatrix<double> K(unknowns, unknowns);
  K.setFromTriplets(triplets.begin(), triplets.end());

  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(o.tolerance);
  cg.setMaxIterations(o.max_iterations);
  cg.compute(K);
  Eigen::VectorXd U = Eigen::VectorXd::Zero(unknowns);
  if (b.norm() > 0.0) U = cg.solve(b);

  FdOracleResult out;
  out.grid = grid;
  out.unknowns = unknowns;
  out.iterations = int(cg.iterations());
  out.residual = b.norm() > 0.0 ? (b - K * U).norm() / b.norm() : 0.0;
  out.converged = out.residual <= o.tolerance * 10.0;

  auto value = [&](int I, int J, int f) {
    return (f <= 0 || f >= cells) ? 0.0 : U(id(I, J, f));
  };
  out.film_gradient = VectorField::Zero(grid.size(), 3);
  for (int k = 0; k < grid.nz; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const int I = i * r, J = j * r;
        Eigen::Vector3d g = Eigen::Vector3d::Zero();
        for (int s = 0; s < r; ++s) {
          const int c = film_start + k * r + s;
          for (int f = c; f <= c + 1; ++f) {
            g(0) += 0.5 * (value(I + 1, J, f) - value(I - 1, J, f)) / (2.0 * dx);
            g(1) += 0.5 * (value(I, J + 1, f) - value(I, J - 1, f)) / (2.0 * dy);
          }
          g(2) += (value(I, J, c + 1) - value(I, J, c)) / dz[c];
        }
        out.film_gradient.row(grid.index(i, j, k)) = g / double(r);
      }
  return out;
}

}  // namespace llb
