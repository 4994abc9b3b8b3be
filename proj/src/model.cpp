#include "llb/model.hpp"

#include <stdexcept>

namespace llb {

void ModelParams::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("params: gamma must be >= 0");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("params: L must be > 0");
  if (!(A >= 0.0) || !std::isfinite(A)) throw std::invalid_argument("params: A must be >= 0");
  if (!(chi11 > 0.0)) throw std::invalid_argument("params: chi11 must be > 0");
  if (!(T > Tc) || !std::isfinite(T) || !std::isfinite(Tc))
    throw std::invalid_argument("params: T must exceed Tc");
}

Eigen::ArrayXd two_thirds_mask(const FilmGrid& g) {
  Eigen::ArrayXd mask(g.size());
  auto keep = [](int i, int n) {
    const int s = i <= n / 2 ? i : n - i;
    return 3 * s <= n;
  };
  for (int m = 0; m < g.nz; ++m)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        mask(g.index(i, j, m)) = (keep(i, g.nx) && keep(j, g.ny) && 3 * m <= 2 * g.nz) ? 1.0 : 0.0;
  return mask;
}

LlbModel::LlbModel(const FilmGrid& grid, const ModelParams& params, StrayOptions stray,
                   bool dealias)
    : grid_(grid), params_(params), basis_(grid), stray_(grid, stray), dealias_(dealias) {
  params_.validate();
  if (dealias_) dealias_mask_ = two_thirds_mask(grid_);
}

PotentialField LlbModel::potential(const VectorField& u, bool film_only) const {
  return params_.stray_field ? stray_.solve(u, film_only) : stray_.zero();
}

VectorField LlbModel::exchange_field(const VectorField& u) const {
  if (params_.A == 0.0) return VectorField::Zero(u.rows(), 3);
  return params_.A * basis_.laplacian(u);
}

VectorField LlbModel::longitudinal_field(const VectorField& u) const {
  const double c = params_.inv_chi();
  if (c == 0.0) return VectorField::Zero(u.rows(), 3);
  VectorField cubic = squared_norm(u).replicate(1, 3) * u;
  if (dealias_) cubic = basis_.apply_multiplier(cubic, dealias_mask_);
  return -c * (u + params_.mu() * cubic);
}

VectorField LlbModel::effective_field(const VectorField& u, const PotentialField& U) const {
  VectorField H = exchange_field(u) + longitudinal_field(u);
  if (params_.stray_field) H -= U.film_gradient();
  return H;
}

VectorField LlbModel::effective_field(const VectorField& u) const {
  return effective_field(u, potential(u, true));
}

VectorField LlbModel::rhs(const VectorField& u, bool implicit_exchange) const {
  const VectorField exchange = exchange_field(u);
  VectorField stray = VectorField::Zero(u.rows(), 3);
  if (params_.stray_field) stray = potential(u, true).film_gradient();
  VectorField out = params_.gamma * cross(u, exchange - stray) + params_.L * longitudinal_field(u);
  out -= params_.L * stray;
  if (!implicit_exchange) out += params_.L * exchange;
  return out;
}

EnergyReport LlbModel::energy(const VectorField& u, const PotentialField& U) const {
  const double dV = grid_.cell_volume();
  const VectorField ex = exchange_field(u);
  EnergyReport e;
  e.exchange = -0.5 * (u * ex).sum() * dV;
  if (params_.stray_field) e.stray = stray_energy(U);
  const double c = params_.inv_chi();
  const ScalarField r2 = squared_norm(u);
  e.longitudinal = c * (0.5 * r2.sum() + 0.25 * params_.mu() * r2.square().sum()) * dV;
  e.total = e.exchange + e.stray + e.longitudinal;
  VectorField H = ex + longitudinal_field(u);
  if (params_.stray_field) H -= U.film_gradient();
  e.dissipation = params_.L * H.square().sum() * dV;
  return e;
}

EnergyReport LlbModel::energy(const VectorField& u) const { return energy(u, potential(u)); }

VectorField effective_field(const VectorField& u, const PotentialField& U, const ModelParams& params) {
  return LlbModel(U.grid, params).effective_field(u, U);
}

VectorField llb_rhs(const VectorField& u, const FilmGrid& grid, const ModelParams& params) {
  return LlbModel(grid, params).rhs(u);
}

EnergyReport energy_report(const VectorField& u, const FilmGrid& grid, const ModelParams& params) {
  return LlbModel(grid, params).energy(u);
}

}  // namespace llb
