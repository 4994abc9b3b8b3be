#include "llb/limit_lab.hpp"
#include "support.hpp"

#include <numbers>
#include <sstream>

using namespace llb;
using std::numbers::pi;

namespace {

SweepSettings small_sweep() {
  SweepSettings s;
  s.hs = {0.2, 0.1};
  s.nx = s.ny = 8;
  s.sim = SimConfig{1e-3, 0.05, Scheme::rk4};
  s.sim.cadence = 5;
  return s;
}

std::string csv(const SweepReport& r) {
  std::ostringstream os;
  write_sweep_csv(os, r);
  write_pairing_csv(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("scaling law") {
  const ScalingLaw law{1.0, 1.0};
  ModelParams p = scaled_params(0.01, law);
  CHECK(p.gamma == doctest::Approx(10.0));
  CHECK(p.L == doctest::Approx(0.1));
  CHECK(p.A == doctest::Approx(0.01));
  p = scaled_params(1.0, law);
  CHECK(p.gamma == 1.0);
  CHECK(p.L == 1.0);
  CHECK(p.A == 1.0);
  p = scaled_params(0.25, ScalingLaw{2.0, 0.5});
  CHECK(p.gamma == doctest::Approx(2.0));
  CHECK(p.L == doctest::Approx(1.0));
  CHECK(p.A == doctest::Approx(0.125));
  for (double h : {0.3, 0.07}) {
    const ModelParams q = scaled_params(h, ScalingLaw{0.7, 0.2});
    CHECK(q.L / (q.gamma * h) == doctest::Approx(0.7));
    CHECK(q.gamma * std::sqrt(h) == doctest::Approx(1.0));
    CHECK(q.A / h == doctest::Approx(0.2));
  }
  ModelParams base;
  base.chi11 = 3.0;
  base.stray_field = false;
  CHECK(scaled_params(0.5, law, base).chi11 == 3.0);
  CHECK_FALSE(scaled_params(0.5, law, base).stray_field);
  CHECK_THROWS_AS(scaled_params(0.0, law), std::invalid_argument);
  CHECK_THROWS_AS(scaled_params(-1.0, law), std::invalid_argument);
}

TEST_CASE("amplitude rules") {
  CHECK(parse_amplitude_rule("paper") == AmplitudeRule::paper);
  CHECK(to_string(AmplitudeRule::unit) == "unit");
  CHECK_THROWS(parse_amplitude_rule("other"));
  const FilmGrid g = make_grid(8, 8, 3, 1, 1, 0.05);
  const PlanarVector3Field prof = default_profile(g, 4);
  const VectorField paper = scaled_initial_data(g, prof, AmplitudeRule::paper);
  const VectorField unit = scaled_initial_data(g, prof, AmplitudeRule::unit);
  CHECK(test::max_abs_diff(paper, 0.05 * unit) < 1e-15);
  for (int k = 0; k < 3; ++k)
    CHECK(test::max_abs_diff(unit.middleRows(k * g.planar_size(), g.planar_size()), prof) == 0.0);
}

TEST_CASE("default profile") {
  const FilmGrid g = make_grid(16, 16, 2);
  const PlanarVector3Field p = default_profile(g, 9);
  const PlanarField r = p.leftCols(2).rowwise().norm();
  CHECK(r.minCoeff() >= 0.8 - 1e-12);
  CHECK(r.maxCoeff() <= 1.2 + 1e-12);
  CHECK(p.col(2).abs().maxCoeff() == 0.0);
  CHECK((p.col(1) / p.col(0)).atan().abs().maxCoeff() <= 0.25 + 1e-12);
  CHECK(test::max_abs_diff(p, default_profile(g, 9)) == 0.0);
  CHECK(test::max_abs_diff(p, default_profile(g, 10)) > 0.0);
  CHECK(make_profile("zero", g, 1).abs().maxCoeff() == 0.0);
  CHECK_THROWS(make_profile("nope", g, 1));
}

TEST_CASE("limit residual vanishes for trivial motions") {
  const FilmGrid g = make_grid(8, 8, 2, 1, 1, 0.1);
  const auto bank = default_test_bank(g);
  std::vector<double> t;
  std::vector<PlanarVectorField> fixed, zero;
  for (int i = 0; i < 11; ++i) {
    t.push_back(0.1 * i);
    PlanarVectorField a(g.planar_size(), 2);
    a.col(0).setConstant(0.6 * (1 + t.back()));
    a.col(1).setConstant(0.8 * (1 + t.back()));
    fixed.push_back(a);
    zero.push_back(PlanarVectorField::Zero(g.planar_size(), 2));
  }
  const LimitResidual r = limit_residual(g, fixed, t, ScalingLaw{}, bank);
  CHECK(r.entries.rows() == 9);
  CHECK(r.entries.cols() == 2);
  CHECK(r.entries.abs().maxCoeff() < 1e-12);
  CHECK(limit_residual(g, zero, t, ScalingLaw{}, bank).entries.abs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(limit_residual(g, {fixed[0], fixed[1]}, {0.0, 0.1}, ScalingLaw{}, bank),
                  std::invalid_argument);
}

TEST_CASE("limit residual density of an in-plane rotation") {
  // ubar = (cos wt, sin wt): ubar ^ ubar_tt = 0, so only the Laplacian term survives
  // and it vanishes for a uniform field.
  const FilmGrid g = make_grid(8, 8, 2, 1, 1, 0.1);
  const SpectralBasis b(g);
  const double dt = 1e-3, w = 2.0;
  auto at = [&](double t) {
    PlanarVectorField u(g.planar_size(), 2);
    u.col(0).setConstant(std::cos(w * t));
    u.col(1).setConstant(std::sin(w * t));
    return u;
  };
  CHECK(limit_residual_density(b, at(0), at(dt), at(2 * dt), dt, 1.0).abs().maxCoeff() < 1e-9);
}

TEST_CASE("sweep") {
  SweepSettings s = small_sweep();
  SweepReport r = run_sweep(s);
  REQUIRE(r.runs.size() == 2);
  CHECK(r.test_names.size() == 9);
  for (const SweepRun& run : r.runs) {
    CHECK(run.ok);
    CHECK(run.times.size() == 11);
    CHECK(run.pairing_series.size() == 9);
  }

  SweepSettings single = s;
  single.hs = {0.1};
  const SweepReport one = run_sweep(single);
  CHECK(one.runs[0].pairing_integrals == r.runs[1].pairing_integrals);

  s.threads = 2;
  CHECK(csv(run_sweep(s)) == csv(r));

  s.profile = "zero";
  const SweepReport zero = run_sweep(s);
  for (const SweepRun& run : zero.runs) {
    for (double v : run.pairing_integrals) CHECK(v == 0.0);
    CHECK(run.residual.entries.abs().maxCoeff() == 0.0);
    CHECK(run.ut_integral == 0.0);
  }

  s.hs = {0.1, 0.2};
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
  s.hs = {};
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
}

TEST_CASE("convergence fit") {
  const std::vector<double> hs{0.4, 0.2, 0.1, 0.05};
  std::vector<double> v;
  for (double h : hs) v.push_back(3.0 * h * h);
  ConvergenceFit f = convergence_fit(hs, v);
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.monotone);
  CHECK(f.verdict == "decaying");
  f = convergence_fit(hs, {0.0, 0.0, 0.0, 0.0});
  CHECK(f.verdict == "identically zero");
  f = convergence_fit(hs, {1.0, 1.0, 1.0, 1.0});
  CHECK_FALSE(f.monotone);
  CHECK(f.verdict == "no decay");
  CHECK_THROWS(convergence_fit(hs, {1.0}));
}
