#include "llb/stray_field.hpp"

#include "llb/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace llb {
namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

// Thomas algorithm for a symmetric tridiagonal system with real coefficients.
// `diag` has n entries, `off` n - 1. Solves in place on `rhs`.
void solve_tridiagonal(const std::vector<double>& diag, const std::vector<double>& off,
                       std::vector<cplx>& rhs, std::vector<double>& scratch) {
  const std::size_t n = diag.size();
  scratch.resize(n);
  double beta = diag[0];
  rhs[0] /= beta;
  for (std::size_t i = 1; i < n; ++i) {
    scratch[i] = off[i - 1] / beta;
    beta = diag[i] - off[i - 1] * scratch[i];
    rhs[i] = (rhs[i] - off[i - 1] * rhs[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i + 1] * rhs[i + 1];
}

// Trapezoid weights of the face quadrature in x3.
double face_weight(int f, int faces) { return (f == 0 || f == faces - 1) ? 0.5 : 1.0; }

}  // namespace

VectorField PotentialField::film_gradient() const {
  const Eigen::Index plane = grid.planar_size();
  return gradient.middleRows(pad_cells * plane, grid.size());
}

ScalarField PotentialField::film_potential() const {
  const Eigen::Index plane = grid.planar_size();
  ScalarField out(grid.size());
  for (int k = 0; k < grid.nz; ++k) {
    const int f = pad_cells + k;
    out.segment(k * plane, plane) =
        0.5 * (potential.segment(f * plane, plane) + potential.segment((f + 1) * plane, plane));
  }
  return out;
}

double PotentialField::exterior_energy() const {
  return grid.area() *
         (decay_rate * (bottom_trace.abs2() + top_trace.abs2())).sum();
}

double PotentialField::gradient_norm_sq() const {
  if (!complete) throw std::logic_error("PotentialField: exterior cells were not reconstructed");
  return gradient.square().sum() * cell_volume() + exterior_energy();
}

StraySolver::StraySolver(const FilmGrid& grid, StrayOptions options)
    : grid_(grid), options_(options), basis_(std::make_unique<SpectralBasis>(grid)) {
  if (!(options.padding >= 1.0)) throw std::invalid_argument("StraySolver: padding must be >= 1");
  pad_cells_ = int(std::ceil((options.padding - 1.0) * grid.nz / 2.0 - 1e-12));
}

PotentialField StraySolver::zero() const {
  const Eigen::Index plane = grid_.planar_size();
  PotentialField out;
  out.grid = grid_;
  out.pad_cells = pad_cells_;
  out.nz_total = grid_.nz + 2 * pad_cells_;
  out.potential = ScalarField::Zero(plane * (out.nz_total + 1));
  out.gradient = VectorField::Zero(plane * out.nz_total, 3);
  out.bottom_trace = Eigen::ArrayXcd::Zero(plane);
  out.top_trace = Eigen::ArrayXcd::Zero(plane);
  out.decay_rate = Eigen::ArrayXd::Zero(plane);
  return out;
}

PotentialField StraySolver::solve(const VectorField& u, bool film_only) const {
  if (u.rows() != grid_.size()) throw std::invalid_argument("StraySolver: field size mismatch");
  const Eigen::Index plane = grid_.planar_size();
  const int nz = grid_.nz;
  const int p = pad_cells_;
  const int cells = nz + 2 * p;
  const int faces = cells + 1;
  const double dz = grid_.dz();

  PotentialField out = zero();
  out.complete = !film_only;

  // In-plane spectra of the source, film layers only.
  Eigen::ArrayXXcd source(plane, 3 * nz);
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < nz; ++k)
      source.col(c * nz + k) = basis_->planar_transform(u.col(c).segment(k * plane, plane));

  Eigen::ArrayXXcd pot_hat = Eigen::ArrayXXcd::Zero(plane, faces);
  Eigen::ArrayXXcd grad_hat = Eigen::ArrayXXcd::Zero(plane, 3 * cells);

  std::vector<double> diag(faces), off(cells), scratch;
  std::vector<cplx> rhs(faces);

  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      const Eigen::Index q = grid_.planar_index(i, j);
      const double kx = basis_->kx_derivative(i);
      const double ky = basis_->ky_derivative(j);
      const double kk = kx * kx + ky * ky;
      const double kappa = std::sqrt(kk);
      out.decay_rate(q) = kappa;

      if (kappa == 0.0) {
        // Only the vertical component can be a gradient; match it exactly.
        cplx acc = 0.0;
        for (int k = 0; k < nz; ++k) {
          const cplx t = source(q, 2 * nz + k);
          grad_hat(q, 2 * cells + p + k) = t;
          pot_hat(q, p + k + 1) = acc + dz * t;
          acc += dz * t;
        }
        for (int f = p + nz + 1; f < faces; ++f) pot_hat(q, f) = acc;
        cplx mean = 0.0;
        for (int f = 0; f < faces; ++f) mean += face_weight(f, faces) * pot_hat(q, f);
        mean /= double(cells);
        pot_hat.row(q) -= mean;
        continue;
      }

      std::fill(diag.begin(), diag.end(), 0.0);
      std::fill(rhs.begin(), rhs.end(), cplx(0.0));
      const double d_coef = dz * (kk / 4.0 + 1.0 / (dz * dz));
      const double o_coef = dz * (kk / 4.0 - 1.0 / (dz * dz));
      for (int c = 0; c < cells; ++c) {
        diag[c] += d_coef;
        diag[c + 1] += d_coef;
        off[c] = o_coef;
        const int k = c - p;
        if (k < 0 || k >= nz) continue;
        const cplx g = I * (kx * source(q, k) + ky * source(q, nz + k));
        const cplx t = source(q, 2 * nz + k);
        rhs[c] += -0.5 * dz * g - t;
        rhs[c + 1] += -0.5 * dz * g + t;
      }
      diag[0] += kappa;
      diag[cells] += kappa;
      solve_tridiagonal(diag, off, rhs, scratch);

      for (int f = 0; f < faces; ++f) pot_hat(q, f) = rhs[f];
      for (int c = 0; c < cells; ++c) {
        const cplx mid = 0.5 * (rhs[c] + rhs[c + 1]);
        grad_hat(q, c) = I * kx * mid;
        grad_hat(q, cells + c) = I * ky * mid;
        grad_hat(q, 2 * cells + c) = (rhs[c + 1] - rhs[c]) / dz;
      }
    }

  out.bottom_trace = pot_hat.col(0);
  out.top_trace = pot_hat.col(cells);

  const int first = film_only ? p : 0;
  const int last = film_only ? p + nz : cells;
  for (int c = 0; c < 3; ++c)
    for (int cell = first; cell < last; ++cell)
      out.gradient.col(c).segment(cell * plane, plane) =
          basis_->planar_inverse(grad_hat.col(c * cells + cell));
  if (film_only) {
    for (int k = 0; k <= nz; ++k)
      out.potential.segment((p + k) * plane, plane) = basis_->planar_inverse(pot_hat.col(p + k));
    return out;
  }
  for (int f = 0; f < faces; ++f)
    out.potential.segment(f * plane, plane) = basis_->planar_inverse(pot_hat.col(f));

  if (p > 0) {
    const ScalarField mag = out.gradient.square().rowwise().sum().sqrt();
    const double interior = mag.maxCoeff();
    const double edge = std::max(mag.head(plane).maxCoeff(), mag.tail(plane).maxCoeff());
    out.boundary_ratio = interior > 0.0 ? edge / interior : 0.0;
    out.decay_ok = out.boundary_ratio <= options_.decay_fraction;
  }
  return out;
}

PotentialField solve_potential(const VectorField& u, const FilmGrid& grid, double padding) {
  return StraySolver(grid, StrayOptions{padding}).solve(u);
}

double stray_energy(const PotentialField& U) { return 0.5 * U.gradient_norm_sq(); }

namespace {

double l2_sq(const PotentialField& U, const PotentialField* minus) {
  if (!U.complete || (minus && !minus->complete))
    throw std::logic_error("potential_l2_sq: exterior faces were not reconstructed");
  const Eigen::Index plane = U.grid.planar_size();
  const int faces = U.nz_total + 1;
  double box = 0.0;
  for (int f = 0; f < faces; ++f) {
    auto layer = U.potential.segment(f * plane, plane);
    const double s = minus ? (layer - minus->potential.segment(f * plane, plane)).square().sum()
                           : layer.square().sum();
    box += face_weight(f, faces) * s;
  }
  box *= U.grid.cell_area() * U.dz();
  double tails = 0.0;
  for (Eigen::Index q = 0; q < plane; ++q) {
    const double kappa = U.decay_rate(q);
    if (kappa == 0.0) continue;
    cplx b = U.bottom_trace(q), t = U.top_trace(q);
    if (minus) {
      b -= minus->bottom_trace(q);
      t -= minus->top_trace(q);
    }
    tails += (std::norm(b) + std::norm(t)) / (2.0 * kappa);
  }
  return box + U.grid.area() * tails;
}

}  // namespace

double potential_l2_sq(const PotentialField& U) { return l2_sq(U, nullptr); }

double potential_difference_l2_sq(const PotentialField& a, const PotentialField& b) {
  if (!(a.grid == b.grid) || a.pad_cells != b.pad_cells)
    throw std::invalid_argument("potential_difference_l2_sq: layouts differ");
  return l2_sq(a, &b);
}

LpBoundCheck check_lp_bound(const VectorField& u, const PotentialField& U, double p) {
  LpBoundCheck out;
  out.source_norm = lp_norm(U.grid, u, p, Measure::integral);
  if (p == 2.0) {
    out.field_norm = std::sqrt(U.gradient_norm_sq());
  } else {
    if (!U.complete) throw std::logic_error("check_lp_bound: exterior cells were not reconstructed");
    const ScalarField mag = U.gradient.square().rowwise().sum().sqrt();
    out.field_norm = std::pow(mag.pow(p).sum() * U.cell_volume(), 1.0 / p);
  }
  out.defined = out.source_norm > 0.0;
  out.ratio = out.defined ? out.field_norm / out.source_norm : 0.0;
  return out;
}

SurfaceStray surface_stray(const SpectralBasis& basis, const PlanarVectorField& u2d) {
  const FilmGrid& g = basis.grid();
  const Eigen::ArrayXcd ux = basis.planar_transform(u2d.col(0));
  const Eigen::ArrayXcd uy = basis.planar_transform(u2d.col(1));
  Eigen::ArrayXcd v = Eigen::ArrayXcd::Zero(g.planar_size());
  Eigen::ArrayXcd gx = v, gy = v;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double kx = basis.kx_derivative(i), ky = basis.ky_derivative(j);
      const double kappa = std::hypot(kx, ky);
      if (kappa == 0.0) continue;
      const auto q = g.planar_index(i, j);
      const cplx kdotu = kx * ux(q) + ky * uy(q);
      v(q) = -I * kdotu / (2.0 * kappa);
      gx(q) = kx * kdotu / (2.0 * kappa);
      gy(q) = ky * kdotu / (2.0 * kappa);
    }
  SurfaceStray out;
  out.trace = basis.planar_inverse(v);
  out.gradient.resize(g.planar_size(), 2);
  out.gradient.col(0) = basis.planar_inverse(gx);
  out.gradient.col(1) = basis.planar_inverse(gy);
  return out;
}

SurfaceStray surface_stray(const FilmGrid& grid, const PlanarVectorField& u2d) {
  return surface_stray(SpectralBasis(grid), u2d);
}

}  // namespace llb
