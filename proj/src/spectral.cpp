#include "llb/spectral.hpp"

#include <numbers>

namespace llb {
namespace {

double signed_frequency(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace

SpectralBasis::SpectralBasis(const FilmGrid& grid)
    : grid_(grid),
      line_in_(std::max(grid.nx, grid.ny)),
      line_out_(std::max(grid.nx, grid.ny)),
      to_nodes_(grid.nz, grid.nz),
      to_modes_(grid.nz, grid.nz),
      derivative_(grid.nz, grid.nz),
      eigenvalues_(grid.size()) {
  using std::numbers::pi;
  const int nz = grid.nz;
  for (int k = 0; k < nz; ++k)
    for (int m = 0; m < nz; ++m) {
      const double arg = m * pi * (k + 0.5) / nz;
      to_nodes_(k, m) = std::cos(arg);
      to_modes_(m, k) = (m == 0 ? 1.0 : 2.0) / nz * std::cos(arg);
      derivative_(k, m) = -kz(m) * std::sin(arg);
    }
  for (int m = 0; m < nz; ++m)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        eigenvalues_(grid.index(i, j, m)) = kx(i) * kx(i) + ky(j) * ky(j) + kz(m) * kz(m);
}

double SpectralBasis::kx(int i) const {
  return 2.0 * std::numbers::pi / grid_.lx * signed_frequency(i, grid_.nx);
}
double SpectralBasis::ky(int j) const {
  return 2.0 * std::numbers::pi / grid_.ly * signed_frequency(j, grid_.ny);
}
double SpectralBasis::kx_derivative(int i) const {
  return (grid_.nx % 2 == 0 && i == grid_.nx / 2) ? 0.0 : kx(i);
}
double SpectralBasis::ky_derivative(int j) const {
  return (grid_.ny % 2 == 0 && j == grid_.ny / 2) ? 0.0 : ky(j);
}
double SpectralBasis::kz(int m) const { return m * std::numbers::pi / grid_.h; }

Eigen::Index SpectralBasis::conjugate_index(Eigen::Index n) const {
  const Eigen::Index plane = grid_.planar_size();
  const int m = int(n / plane);
  const int j = int((n % plane) / grid_.nx);
  const int i = int(n % grid_.nx);
  return grid_.index((grid_.nx - i) % grid_.nx, (grid_.ny - j) % grid_.ny, m);
}

void SpectralBasis::fft2(std::complex<double>* layer, bool inverse) const {
  const int nx = grid_.nx, ny = grid_.ny;
  auto run = [&](Eigen::FFT<double>& fft, int n) {
    if (inverse)
      fft.inv(line_out_.data(), line_in_.data(), n);
    else
      fft.fwd(line_out_.data(), line_in_.data(), n);
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) line_in_[i] = layer[i + nx * j];
    run(fft_x_, nx);
    for (int i = 0; i < nx; ++i) layer[i + nx * j] = line_out_[i];
  }
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) line_in_[j] = layer[i + nx * j];
    run(fft_y_, ny);
    for (int j = 0; j < ny; ++j) layer[i + nx * j] = line_out_[j];
  }
}

SpectralField SpectralBasis::transform(const ScalarField& f) const {
  const Eigen::Index plane = grid_.planar_size();
  Eigen::ArrayXcd layers = f.cast<std::complex<double>>();
  for (int k = 0; k < grid_.nz; ++k) fft2(layers.data() + k * plane, false);
  layers /= double(plane);
  Eigen::Map<Eigen::MatrixXcd> nodes(layers.data(), plane, grid_.nz);
  SpectralField out{grid_, Eigen::ArrayXcd(grid_.size())};
  Eigen::Map<Eigen::MatrixXcd> modes(out.coeff.data(), plane, grid_.nz);
  modes.noalias() = nodes * to_modes_.transpose().cast<std::complex<double>>();
  return out;
}

ScalarField SpectralBasis::inverse(const SpectralField& s) const {
  const Eigen::Index plane = grid_.planar_size();
  Eigen::ArrayXcd layers(grid_.size());
  Eigen::Map<const Eigen::MatrixXcd> modes(s.coeff.data(), plane, grid_.nz);
  Eigen::Map<Eigen::MatrixXcd> nodes(layers.data(), plane, grid_.nz);
  nodes.noalias() = modes * to_nodes_.transpose().cast<std::complex<double>>();
  // Eigen's inverse FFT divides by n; undo it so the forward/inverse pair is
  // normalized on the forward side only.
  for (int k = 0; k < grid_.nz; ++k) fft2(layers.data() + k * plane, true);
  return layers.real() * double(plane);
}

Eigen::ArrayXcd SpectralBasis::planar_transform(const PlanarField& f) const {
  Eigen::ArrayXcd c = f.cast<std::complex<double>>();
  fft2(c.data(), false);
  return c / double(grid_.planar_size());
}

PlanarField SpectralBasis::planar_inverse(const Eigen::ArrayXcd& c) const {
  Eigen::ArrayXcd layer = c;
  fft2(layer.data(), true);
  return layer.real() * double(grid_.planar_size());
}

VectorField SpectralBasis::gradient(const ScalarField& f) const {
  const std::complex<double> I(0.0, 1.0);
  SpectralField s = transform(f);
  SpectralField sx = s, sy = s;
  for (int m = 0; m < grid_.nz; ++m)
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i) {
        const auto n = grid_.index(i, j, m);
        sx.coeff(n) *= I * kx_derivative(i);
        sy.coeff(n) *= I * ky_derivative(j);
      }
  VectorField out(grid_.size(), 3);
  out.col(0) = inverse(sx);
  out.col(1) = inverse(sy);
  out.col(2) = vertical_derivative(f);
  return out;
}

ScalarField SpectralBasis::vertical_derivative(const ScalarField& f) const {
  const Eigen::Index plane = grid_.planar_size();
  Eigen::Map<const Eigen::MatrixXd> nodes(f.data(), plane, grid_.nz);
  // Vertical transform is real and commutes with the in-plane one.
  ScalarField out(grid_.size());
  Eigen::Map<Eigen::MatrixXd> result(out.data(), plane, grid_.nz);
  result.noalias() = nodes * (derivative_ * to_modes_).transpose();
  return out;
}

ScalarField SpectralBasis::laplacian(const ScalarField& f) const {
  SpectralField s = transform(f);
  s.coeff *= -eigenvalues_;
  return inverse(s);
}

VectorField SpectralBasis::laplacian(const VectorField& f) const {
  VectorField out(f.rows(), 3);
  for (int c = 0; c < 3; ++c) out.col(c) = laplacian(ScalarField(f.col(c)));
  return out;
}

VectorField SpectralBasis::apply_multiplier(const VectorField& f,
                                            const Eigen::ArrayXd& multiplier) const {
  VectorField out(f.rows(), 3);
  for (int c = 0; c < 3; ++c) {
    SpectralField s = transform(ScalarField(f.col(c)));
    s.coeff *= multiplier;
    out.col(c) = inverse(s);
  }
  return out;
}

PlanarVectorField SpectralBasis::planar_gradient(const PlanarField& f) const {
  const std::complex<double> I(0.0, 1.0);
  const Eigen::ArrayXcd c = planar_transform(f);
  Eigen::ArrayXcd cx = c, cy = c;
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) {
      const auto n = grid_.planar_index(i, j);
      cx(n) *= I * kx_derivative(i);
      cy(n) *= I * ky_derivative(j);
    }
  PlanarVectorField out(grid_.planar_size(), 2);
  out.col(0) = planar_inverse(cx);
  out.col(1) = planar_inverse(cy);
  return out;
}

PlanarField SpectralBasis::planar_laplacian(const PlanarField& f) const {
  Eigen::ArrayXcd c = planar_transform(f);
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i) c(grid_.planar_index(i, j)) *= -(kx(i) * kx(i) + ky(j) * ky(j));
  return planar_inverse(c);
}

SpectralField transform(const FilmGrid& grid, const ScalarField& f) {
  return SpectralBasis(grid).transform(f);
}
ScalarField inverse(const SpectralField& s) { return SpectralBasis(s.grid).inverse(s); }
VectorField gradient(const FilmGrid& grid, const ScalarField& f) {
  return SpectralBasis(grid).gradient(f);
}
ScalarField laplacian(const FilmGrid& grid, const ScalarField& f) {
  return SpectralBasis(grid).laplacian(f);
}

}  // namespace llb
