#include "llb/integrator.hpp"

#include "llb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace llb {

std::string to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "semi-implicit"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "rk4") return Scheme::rk4;
  if (name == "semi-implicit" || name == "semi_implicit") return Scheme::semi_implicit;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

GalerkinProjector::GalerkinProjector(const SpectralBasis& basis, long n) : basis_(&basis) {
  if (n < 1) throw std::invalid_argument("galerkin: n must be >= 1");
  const FilmGrid& g = basis.grid();
  const Eigen::Index modes = g.size();
  mask_ = Eigen::ArrayXd::Zero(modes);
  if (n >= modes) {
    mask_.setOnes();
    retained_ = modes;
    identity_ = true;
    return;
  }
  const Eigen::ArrayXd& lambda = basis.eigenvalues();
  const Eigen::Index plane = g.planar_size();
  std::vector<Eigen::Index> order(modes);
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (lambda(a) != lambda(b)) return lambda(a) < lambda(b);
    if (a / plane != b / plane) return a / plane < b / plane;
    return std::min(a, basis.conjugate_index(a)) < std::min(b, basis.conjugate_index(b));
  });
  for (Eigen::Index idx : order) {
    if (retained_ >= n) break;
    if (mask_(idx) != 0.0) continue;
    const Eigen::Index partner = basis.conjugate_index(idx);
    mask_(idx) = 1.0;
    mask_(partner) = 1.0;
    retained_ += partner == idx ? 1 : 2;
  }
}

ScalarField GalerkinProjector::apply(const ScalarField& f) const {
  if (identity_) return f;
  SpectralField s = basis_->transform(f);
  s.coeff *= mask_;
  return basis_->inverse(s);
}

VectorField GalerkinProjector::apply(const VectorField& f) const {
  if (identity_) return f;
  return basis_->apply_multiplier(f, mask_);
}

double GalerkinProjector::leakage(const VectorField& f) const {
  double outside = 0.0, largest = 0.0;
  for (int c = 0; c < 3; ++c) {
    const Eigen::ArrayXd mag = basis_->transform(ScalarField(f.col(c))).coeff.abs();
    largest = std::max(largest, mag.maxCoeff());
    outside = std::max(outside, (mag * (1.0 - mask_)).maxCoeff());
  }
  return largest > 0.0 ? outside / largest : 0.0;
}

VectorField galerkin_project(const VectorField& f, const FilmGrid& grid, long n) {
  SpectralBasis basis(grid);
  return GalerkinProjector(basis, n).apply(f);
}

double rk4_stable_dt(const FilmGrid& grid, const ModelParams& params, double c) {
  const double la = params.L * params.A;
  if (la <= 0.0) return std::numeric_limits<double>::infinity();
  const double s = grid.min_spacing();
  return c * s * s / la;
}

VectorField step_rk4(const LlbModel& model, const VectorField& u, double dt, double stability_c,
                     const GalerkinProjector* projector) {
  if (dt == 0.0) return u;
  const double limit = rk4_stable_dt(model.grid(), model.params(), stability_c);
  if (dt > limit) {
    std::ostringstream msg;
    msg << "rk4: dt = " << dt << " exceeds the stability bound " << limit;
    throw StabilityError(msg.str(), limit);
  }
  auto f = [&](const VectorField& v) {
    VectorField r = model.rhs(v);
    return projector ? projector->apply(r) : r;
  };
  const VectorField k1 = f(u);
  const VectorField k2 = f(u + 0.5 * dt * k1);
  const VectorField k3 = f(u + 0.5 * dt * k2);
  const VectorField k4 = f(u + dt * k3);
  return u + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

VectorField step_semi_implicit(const LlbModel& model, const VectorField& u, double dt,
                               const GalerkinProjector* projector) {
  if (dt == 0.0) return u;
  const VectorField explicit_part = u + dt * model.rhs(u, true);
  const ModelParams& p = model.params();
  Eigen::ArrayXd multiplier = 1.0 / (1.0 + dt * p.L * p.A * model.basis().eigenvalues());
  if (projector) multiplier *= projector->mask();
  return model.basis().apply_multiplier(explicit_part, multiplier);
}

Integrator::Integrator(const LlbModel& model, SimConfig config)
    : model_(&model), config_(config) {
  if (!(config_.dt > 0.0)) throw std::invalid_argument("integrator: dt must be > 0");
  if (!(config_.t_end >= 0.0)) throw std::invalid_argument("integrator: t_end must be >= 0");
  if (config_.cadence < 1) throw std::invalid_argument("integrator: cadence must be >= 1");
  if (config_.galerkin_n) projector_.emplace(model.basis(), *config_.galerkin_n);
}

VectorField Integrator::step(const VectorField& u, double dt) const {
  const GalerkinProjector* proj = projector_ ? &*projector_ : nullptr;
  if (config_.scheme == Scheme::rk4) return step_rk4(*model_, u, dt, config_.stability_c, proj);
  return step_semi_implicit(*model_, u, dt, proj);
}

SimState Integrator::initial_state(const VectorField& u0) const {
  SimState s;
  s.u = projector_ ? projector_->apply(u0) : u0;
  s.U = model_->potential(s.u);
  return s;
}

Trajectory Integrator::run(const VectorField& u0) const {
  if (!u0.allFinite()) throw std::invalid_argument("run: initial data is not finite");
  Trajectory tr;
  SimState s = initial_state(u0);
  tr.records.push_back(compute_record(*model_, s));
  tr.snapshots.push_back(s);
  if (config_.t_end == 0.0) return tr;

  const long steps = std::max(1L, long(std::ceil(config_.t_end / config_.dt - 1e-9)));
  for (long n = 1; n <= steps; ++n) {
    const double t_next = n == steps ? config_.t_end : n * config_.dt;
    VectorField next = step(s.u, t_next - s.t);
    if (!next.allFinite()) {
      tr.ok = false;
      tr.failure = "non-finite state at step " + std::to_string(n);
      if (tr.snapshots.back().step != s.step) tr.snapshots.push_back(s);
      break;
    }
    s.t = t_next;
    s.step = n;
    s.u = std::move(next);
    s.U = model_->potential(s.u);
    tr.records.push_back(compute_record(*model_, s));
    if (n % config_.cadence == 0 || n == steps) tr.snapshots.push_back(s);
  }
  fill_rate_monitors(tr);
  return tr;
}

Trajectory run(const LlbModel& model, const SimConfig& config, const VectorField& u0) {
  return Integrator(model, config).run(u0);
}

}  // namespace llb
