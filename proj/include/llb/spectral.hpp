#pragma once

#include "llb/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <complex>
#include <vector>

namespace llb {

/// Coefficients c(kx, ky, m) of
///   f(x) = sum c * exp(i k.x) * cos(m pi x3 / h),
/// stored with the same flat layout as the node values (m replaces k).
struct SpectralField {
  FilmGrid grid;
  Eigen::ArrayXcd coeff;
};

/// Fourier (in-plane, periodic) x cosine (vertical, Neumann) basis on a FilmGrid.
///
/// Holds FFT plans, so an instance must not be shared between threads.
class SpectralBasis {
 public:
  explicit SpectralBasis(const FilmGrid& grid);

  const FilmGrid& grid() const { return grid_; }

  SpectralField transform(const ScalarField& f) const;
  ScalarField inverse(const SpectralField& s) const;

  Eigen::ArrayXcd planar_transform(const PlanarField& f) const;
  PlanarField planar_inverse(const Eigen::ArrayXcd& c) const;

  /// Spectral gradient at the nodes. The in-plane Nyquist mode has zero derivative.
  VectorField gradient(const ScalarField& f) const;
  ScalarField vertical_derivative(const ScalarField& f) const;
  ScalarField laplacian(const ScalarField& f) const;
  VectorField laplacian(const VectorField& f) const;

  PlanarVectorField planar_gradient(const PlanarField& f) const;
  PlanarField planar_laplacian(const PlanarField& f) const;

  /// Wavenumbers of the in-plane index (signed frequency times 2 pi / L).
  double kx(int i) const;
  double ky(int j) const;
  /// Odd-derivative wavenumbers: zero on the Nyquist index.
  double kx_derivative(int i) const;
  double ky_derivative(int j) const;
  double kz(int m) const;

  /// -Laplacian eigenvalue of each mode, flat layout.
  const Eigen::ArrayXd& eigenvalues() const { return eigenvalues_; }

  /// Conjugate partner of a flat mode index (same m).
  Eigen::Index conjugate_index(Eigen::Index n) const;

  /// Apply a real multiplier to every mode of each component.
  VectorField apply_multiplier(const VectorField& f, const Eigen::ArrayXd& multiplier) const;

  // In-place 2D FFT on an nx*ny layer (x fastest). Forward is unnormalized.
  void fft2(std::complex<double>* layer, bool inverse) const;

 private:
  FilmGrid grid_;
  mutable Eigen::FFT<double> fft_x_;
  mutable Eigen::FFT<double> fft_y_;
  mutable std::vector<std::complex<double>> line_in_;
  mutable std::vector<std::complex<double>> line_out_;
  Eigen::MatrixXd to_nodes_;    // nz x nz: node k <- mode m
  Eigen::MatrixXd to_modes_;    // nz x nz: mode m <- node k
  Eigen::MatrixXd derivative_;  // nz x nz: d/dx3 of mode m at node k
  Eigen::ArrayXd eigenvalues_;
};

SpectralField transform(const FilmGrid& grid, const ScalarField& f);
ScalarField inverse(const SpectralField& s);
VectorField gradient(const FilmGrid& grid, const ScalarField& f);
ScalarField laplacian(const FilmGrid& grid, const ScalarField& f);

/// Quadrature weight of one coefficient under the L2 norm:
///   int |f|^2 = |Omega(h)| * sum_modes weight(m) * |c|^2.
inline double parseval_weight(int m) { return m == 0 ? 1.0 : 0.5; }

}  // namespace llb
