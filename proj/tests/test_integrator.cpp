#include "llb/integrator.hpp"
#include "llb/random_field.hpp"
#include "llb/spectral.hpp"
#include "support.hpp"

#include <limits>
#include <numbers>

using namespace llb;
using std::numbers::pi;

namespace {

/// Longitudinal decay r' = -a r - b r^3, a = L/chi, b = L mu/chi.
double scalar_ode(double r0, double a, double b, double t) {
  return std::sqrt(a / ((a / (r0 * r0) + b) * std::exp(2 * a * t) - b));
}

VectorField uniform_x(const FilmGrid& g, double r) {
  VectorField u = VectorField::Zero(g.size(), 3);
  u.col(0).setConstant(r);
  return u;
}

ModelParams exchange_only(double L, double A) {
  ModelParams p;
  p.gamma = 0.0;
  p.L = L;
  p.A = A;
  p.chi11 = std::numeric_limits<double>::infinity();
  p.stray_field = false;
  return p;
}

}  // namespace

TEST_CASE("scheme names") {
  CHECK(parse_scheme("rk4") == Scheme::rk4);
  CHECK(parse_scheme("semi-implicit") == Scheme::semi_implicit);
  CHECK(to_string(Scheme::semi_implicit) == "semi-implicit");
  CHECK_THROWS(parse_scheme("euler"));
}

TEST_CASE("dt = 0 is the identity") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.2);
  const LlbModel m(g, ModelParams{});
  std::mt19937_64 rng(1);
  const VectorField u = test::white_field(g, rng);
  CHECK((step_rk4(m, u, 0.0) == u).all());
  CHECK((step_semi_implicit(m, u, 0.0) == u).all());
}

TEST_CASE("semi-implicit amplification of a pure exchange mode") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.25);
  const ModelParams p = exchange_only(0.8, 0.3);
  const LlbModel m(g, p);
  const double lambda = 4 * pi * pi + std::pow(pi / 0.25, 2);
  const VectorField u = sample_vector(g, [](double x, double, double z) {
    return Eigen::Vector3d(std::cos(2 * pi * x) * std::cos(pi * z / 0.25), 0.0, 0.0);
  });
  const double dt = 0.01;
  const VectorField next = step_semi_implicit(m, u, dt);
  CHECK(test::max_abs_diff(next, u / (1 + dt * p.L * p.A * lambda)) < 1e-13);
}

TEST_CASE("RK4 reproduces the heat kernel to fifth order") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.25);
  const ModelParams p = exchange_only(1.0, 0.01);
  const LlbModel m(g, p);
  const VectorField u = sample_vector(g, [](double, double y, double) {
    return Eigen::Vector3d(0.0, std::sin(4 * pi * y), 0.0);
  });
  const double z = p.L * p.A * 16 * pi * pi;
  double prev = 0.0;
  for (double dt : {0.02, 0.01}) {
    const double err = test::max_abs_diff(step_rk4(m, u, dt), u * std::exp(-z * dt));
    CHECK(err < std::pow(z * dt, 5));
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(32.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("RK4 follows the scalar ODE") {
  const FilmGrid g = make_grid(4, 4, 2, 1, 1, 0.2);
  ModelParams p;
  p.L = 1.0;
  const LlbModel m(g, p);
  SimConfig cfg;
  cfg.scheme = Scheme::rk4;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.cadence = 100;
  const Trajectory tr = run(m, cfg, uniform_x(g, 1.0));
  const double a = p.L * p.inv_chi(), b = a * p.mu();
  for (const SimState& s : tr.snapshots)
    CHECK(std::abs(s.u(0, 0) - scalar_ode(1.0, a, b, s.t)) < 1e-8);
}

TEST_CASE("RK4 stability bound") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.1);
  ModelParams p;
  p.L = 2.0;
  p.A = 0.5;
  const LlbModel m(g, p);
  const double limit = rk4_stable_dt(g, p, 0.25);
  CHECK(limit == doctest::Approx(0.25 * 0.025 * 0.025 / 1.0));
  try {
    step_rk4(m, uniform_x(g, 1.0), 2 * limit);
    FAIL("expected StabilityError");
  } catch (const StabilityError& e) {
    CHECK(e.suggested_dt() == doctest::Approx(limit));
  }
  CHECK(std::isinf(rk4_stable_dt(g, exchange_only(1.0, 0.0))));
}

TEST_CASE("Galerkin projector") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.2);
  const SpectralBasis b(g);
  std::mt19937_64 rng(3);
  const VectorField f = test::white_field(g, rng);

  CHECK(GalerkinProjector(b, g.size()).is_identity());
  CHECK((galerkin_project(f, g, g.size()) == f).all());
  CHECK_THROWS_AS(GalerkinProjector(b, 0), std::invalid_argument);

  for (long n : {1L, 5L, 20L, 100L}) {
    const GalerkinProjector P(b, n);
    CHECK(P.retained() >= n);
    CHECK(P.retained() <= n + 1);
    const VectorField pf = P.apply(f);
    CHECK(test::max_abs_diff(P.apply(pf), pf) < 1e-13);
    CHECK(pf.matrix().norm() <= f.matrix().norm());
    CHECK(P.leakage(pf) < 1e-14);
    for (Eigen::Index k = 0; k < g.size(); ++k) CHECK(P.mask()(k) == P.mask()(b.conjugate_index(k)));
  }
  CHECK(GalerkinProjector(b, 1).apply(f).col(0).isApproxToConstant(f.col(0).mean(), 1e-12));
}

TEST_CASE("run bookkeeping") {
  const FilmGrid g = make_grid(8, 8, 2, 1, 1, 0.2);
  const LlbModel m(g, ModelParams{});
  std::mt19937_64 rng(4);
  const VectorField u0 = random_smooth_field(g, rng, 0.5);

  SimConfig zero;
  const Trajectory t0 = run(m, zero, u0);
  CHECK(t0.snapshots.size() == 1);
  CHECK((t0.snapshots[0].u == u0).all());
  CHECK(t0.records.size() == 1);

  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.0105;
  cfg.cadence = 4;
  const Trajectory tr = run(m, cfg, u0);
  CHECK(tr.ok);
  CHECK(tr.records.size() == 12);
  CHECK(tr.snapshots.size() == 4);
  CHECK(tr.snapshots.back().t == doctest::Approx(0.0105));
  CHECK(std::isfinite(tr.records[tr.snapshots[1].step].ut_norm));
  CHECK_THROWS(Integrator(m, SimConfig{0.0, 1.0}));
}

TEST_CASE("non-finite state aborts the run") {
  const FilmGrid g = make_grid(4, 4, 2, 1, 1, 0.2);
  const LlbModel m(g, ModelParams{});
  SimConfig cfg;
  cfg.dt = 1.0;
  cfg.t_end = 50.0;
  const Trajectory tr = run(m, cfg, uniform_x(g, 1e3));
  CHECK_FALSE(tr.ok);
  CHECK(tr.snapshots.back().u.allFinite());
  CHECK_THROWS(run(m, cfg, uniform_x(g, std::numeric_limits<double>::quiet_NaN())));
}

TEST_CASE("energy is nonincreasing along a run") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.2);
  ModelParams p;
  p.gamma = 1.0;
  p.L = 0.2;
  p.A = 0.05;
  const LlbModel m(g, p);
  std::mt19937_64 rng(5);
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.05;
  const Trajectory tr = run(m, cfg, random_smooth_field(g, rng, 0.5));
  const double tol = 1e-10 * tr.records.front().energy.total;
  for (std::size_t i = 1; i < tr.records.size(); ++i)
    CHECK(tr.records[i].energy.total <= tr.records[i - 1].energy.total + tol);
}

TEST_CASE("projected runs stay in the retained modes") {
  const FilmGrid g = make_grid(8, 8, 4, 1, 1, 0.2);
  ModelParams p;
  p.L = 0.3;
  p.A = 0.05;
  const LlbModel m(g, p);
  std::mt19937_64 rng(6);
  for (Scheme s : {Scheme::semi_implicit, Scheme::rk4}) {
    SimConfig cfg;
    cfg.scheme = s;
    cfg.dt = 2e-4;
    cfg.t_end = 0.01;
    cfg.galerkin_n = 24;
    const Integrator integ(m, cfg);
    const Trajectory tr = integ.run(random_smooth_field(g, rng, 0.2));
    for (const SimState& st : tr.snapshots) CHECK(integ.projector()->leakage(st.u) < 1e-12);
  }
}
