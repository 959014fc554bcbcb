#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "gfbbm/errors.hpp"
#include "gfbbm/evolution.hpp"
#include "gfbbm/solitary.hpp"

using namespace gfbbm;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(std::abs(a[i] - b[i]), m);
  return m;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(std::abs(v), m);
  return m;
}

}  // namespace

TEST_CASE("rhs: constants are stationary") {
  SpectralGrid grid = make_grid(16.0, 128);
  Evolver ev({1.3, 1, 1.2}, grid, 1e-3);
  std::vector<double> constant(grid.n_points(), 0.7);
  CHECK(max_abs(ev.rhs(constant)) < 1e-14);
}

TEST_CASE("rhs of a traveling wave is -c Q'") {
  SpectralGrid grid = make_grid(64.0, 1 << 10);
  const double c = 1.5;
  SolitaryWave wave = exact_solution(c, grid);
  Evolver ev(wave.params, grid, 1e-4);
  std::vector<double> rhs = ev.rhs(wave.profile);

  // Q' for Q = 3(c-1) sech^2(kappa x): analytic derivative as the oracle
  const double amp = 3.0 * (c - 1.0);
  const double kappa = 0.5 * std::sqrt(4.0 * (c - 1.0) / (5.0 * c - 3.0));
  double err = 0.0;
  for (int i = 0; i < grid.n_points(); ++i) {
    const double x = grid.nodes()[i];
    const double sech = 1.0 / std::cosh(kappa * x);
    const double qprime =
        -2.0 * amp * kappa * sech * sech * std::tanh(kappa * x);
    err = std::max(std::abs(rhs[i] - (-c) * qprime), err);
  }
  CHECK(err < 1e-8);
}

TEST_CASE("rhs linear phase: single mode at the dispersion speed") {
  SpectralGrid grid = make_grid(kPi, 128);
  const double eps = 1e-8;
  Evolver ev({2.0, 1, 1.5}, grid, 1e-4);
  std::vector<double> mode(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i)
    mode[i] = eps * std::cos(grid.nodes()[i]);
  std::vector<double> rhs = ev.rhs(mode);
  // omega(1) = (1 + 3/4)/(1 + 5/4) = 7/9
  const double omega = 7.0 / 9.0;
  double err = 0.0;
  for (int i = 0; i < grid.n_points(); ++i)
    err = std::max(
        std::abs(rhs[i] - eps * omega * std::sin(grid.nodes()[i])), err);
  CHECK(err < 1e-6 * eps);
}

TEST_CASE("RK4 step basics") {
  SpectralGrid grid = make_grid(16.0, 128);
  Evolver ev({1.5, 1, 1.3}, grid, 1e-3);

  EvolutionState state;
  state.field.assign(grid.n_points(), 0.0);
  ev.step(state);
  CHECK(max_abs(state.field) == 0.0);
  CHECK(state.step_count == 1);
  CHECK(state.time == doctest::Approx(1e-3));
}

TEST_CASE("one linear RK4 step matches the propagator to O(dt^5)") {
  SpectralGrid grid = make_grid(kPi, 64);
  const ModelParams params{2.0, 1, 1.5};
  std::vector<double> u0(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i)
    u0[i] = std::cos(grid.nodes()[i]) + 0.5 * std::sin(2.0 * grid.nodes()[i]);

  auto one_step_error = [&](double dt) {
    Evolver ev(params, grid, dt, {.linear_only = true});
    EvolutionState state{u0, 0.0, 0};
    ev.step(state);
    return max_diff(state.field, ev.linear_propagate(u0, dt));
  };
  const double e1 = one_step_error(0.1), e2 = one_step_error(0.05);
  CHECK(e1 / e2 > 25.0);
  CHECK(e1 / e2 < 40.0);
}

TEST_CASE("sech^2 wave translates under RK4 (paper step size)") {
  SpectralGrid grid = make_grid(64.0, 1 << 10);
  const double c = 1.5, dt = 5e-4;
  SolitaryWave wave = exact_solution(c, grid);
  Evolver ev(wave.params, grid, dt);
  EvolutionState state{wave.profile, 0.0, 0};
  for (int s = 0; s < 2000; ++s) ev.step(state);
  CHECK(state.time == doctest::Approx(1.0));
  std::vector<double> expected = translate(wave.profile, c * 1.0, grid);
  CHECK(max_diff(state.field, expected) < 1e-5);
}

TEST_CASE("linear propagator: identity, zero mode, revolution, reversibility") {
  SpectralGrid grid = make_grid(kPi, 128);
  const ModelParams params{2.0, 1, 1.5};
  std::vector<double> u(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i)
    u[i] = 0.3 + std::cos(grid.nodes()[i]);

  CHECK(max_diff(linear_propagator(u, params, grid, 0.0), u) < 1e-13);

  // zero mode invariant: the mean never moves
  std::vector<double> moved = linear_propagator(u, params, grid, 1.7);
  CHECK(quadrature(moved, grid) == doctest::Approx(quadrature(u, grid)));

  // full phase revolution of the xi = 1 mode at alpha = 2: period 2pi/(7/9)
  std::vector<double> cosx(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i)
    cosx[i] = std::cos(grid.nodes()[i]);
  const double period = 2.0 * kPi / (7.0 / 9.0);
  CHECK(max_diff(linear_propagator(cosx, params, grid, period), cosx) < 1e-10);

  // time reversibility
  std::vector<double> back =
      linear_propagator(linear_propagator(u, params, grid, 2.3), params, grid,
                        -2.3);
  CHECK(max_diff(back, u) < 1e-12);

  // unitary on the F-weighted norm
  CHECK(f_norm_sq(moved, params.alpha, grid) ==
        doctest::Approx(f_norm_sq(u, params.alpha, grid)).epsilon(1e-12));
}

TEST_CASE("invariants: closed forms on cos(x)") {
  SpectralGrid grid = make_grid(kPi, 256);
  EvolutionState state;
  state.field.resize(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i)
    state.field[i] = std::cos(grid.nodes()[i]);
  const ModelParams params{2.0, 1, 1.5};

  InvariantRecord rec = invariants(state, params, grid);
  CHECK(std::abs(rec.mass) < 1e-13);
  CHECK(rec.momentum == doctest::Approx(9.0 * kPi / 8.0).epsilon(1e-12));
  CHECK(rec.energy == doctest::Approx(-7.0 * kPi / 8.0).epsilon(1e-12));

  EvolutionState zero;
  zero.field.assign(grid.n_points(), 0.0);
  InvariantRecord z = invariants(zero, params, grid);
  CHECK(z.mass == 0.0);
  CHECK(z.momentum == 0.0);
  CHECK(z.energy == 0.0);
}

TEST_CASE("short trajectory conserves I, F, H") {
  SpectralGrid grid = make_grid(64.0, 1 << 9);
  SolitaryWave wave = solve_petviashvili({2.0, 1, 1.5}, grid);
  Evolver ev(wave.params, grid, 1e-3);
  EvolutionState state{wave.profile, 0.0, 0};
  for (double& v : state.field) v *= 1.1;  // perturbed
  const InvariantRecord start = invariants(state, wave.params, grid);
  for (int s = 0; s < 2000; ++s) ev.step(state);
  const InvariantRecord end = invariants(state, wave.params, grid);
  CHECK(std::abs(end.mass - start.mass) < 1e-12);
  CHECK(std::abs(end.momentum - start.momentum) < 1e-7);
  CHECK(std::abs(end.energy - start.energy) < 1e-7);
}

TEST_CASE("RK4 order against the exact linear flow") {
  SpectralGrid grid = make_grid(kPi, 64);
  const ModelParams params{1.5, 1, 1.2};
  std::vector<double> u0(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i)
    u0[i] = std::cos(grid.nodes()[i]) + 0.4 * std::sin(3.0 * grid.nodes()[i]);

  auto error_at = [&](double dt) {
    Evolver ev(params, grid, dt, {.linear_only = true});
    EvolutionState state{u0, 0.0, 0};
    const long steps = std::llround(1.0 / dt);
    for (long s = 0; s < steps; ++s) ev.step(state);
    return max_diff(state.field, ev.linear_propagate(u0, 1.0));
  };
  const double ratio = error_at(0.05) / error_at(0.025);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("CFL guard is a hard error") {
  SpectralGrid grid = make_grid(64.0, 1 << 10);
  CHECK_THROWS_AS(Evolver({2.0, 1, 1.5}, grid, 1.0), ConfigError);
  CHECK_NOTHROW(Evolver({2.0, 1, 1.5}, grid, 5e-4));
}

TEST_CASE("orbital distance: exact translates and perturbations") {
  SpectralGrid grid = make_grid(64.0, 1 << 9);
  SolitaryWave wave = exact_solution(1.5, grid);

  // the distance floor is sqrt(roundoff) of the squared norm, ~1e-7
  std::vector<double> moved = translate(wave.profile, 2.341, grid);
  OrbitalDistance d = orbital_distance(moved, wave.profile, 2.0, grid);
  CHECK(d.distance < 1e-6);
  CHECK(std::abs(d.shift - 2.341) < 1e-6);

  std::vector<double> scaled = wave.profile;
  for (double& v : scaled) v *= 1.1;
  OrbitalDistance d2 = orbital_distance(scaled, wave.profile, 2.0, grid);
  const double expected =
      0.1 * std::sqrt(f_norm_sq(wave.profile, 2.0, grid));
  CHECK(d2.distance == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("run_experiment: unperturbed wave stays on the orbit") {
  SpectralGrid grid = make_grid(64.0, 1 << 9);
  SolitaryWave wave = solve_petviashvili({2.0, 1, 1.5}, grid);
  ExperimentOptions options;
  options.sample_interval = 2.0;
  EvolutionTrace trace = run_experiment({1.0}, wave, 2e-3, 20.0, options);
  REQUIRE(trace.times.size() == 11);
  for (double d : trace.orbital_dist) CHECK(d < 1e-4);
  // the peak starts at 0 and travels at speed c: x = 3 at the t = 2 sample
  CHECK(trace.peak_location[1] == doctest::Approx(3.0).epsilon(1e-3));
  const double f0 = trace.invariant_series.front().momentum;
  for (const InvariantRecord& rec : trace.invariant_series)
    CHECK(std::abs(rec.momentum - f0) < 1e-7);
}

TEST_CASE("run_experiment: perturbed wave stays bounded") {
  SpectralGrid grid = make_grid(64.0, 1 << 9);
  SolitaryWave wave = solve_petviashvili({2.0, 1, 1.5}, grid);
  EvolutionTrace trace = run_experiment({1.1}, wave, 2e-3, 5.0);
  const double d1 = trace.orbital_dist[2];  // t = 1
  for (std::size_t i = 2; i < trace.orbital_dist.size(); ++i)
    CHECK(trace.orbital_dist[i] < 3.0 * d1);
}

TEST_CASE("blow-up is detected and carries a time") {
  SpectralGrid grid = make_grid(16.0, 128);
  SolitaryWave wave = exact_solution(1.5, grid);
  try {
    run_experiment({1e200}, wave, 1e-3, 1.0);
    FAIL("expected BlowUpError");
  } catch (const BlowUpError& err) {
    CHECK(std::isfinite(err.last_finite_time));
  }
}

TEST_CASE("snapshots are recorded when asked") {
  SpectralGrid grid = make_grid(32.0, 256);
  SolitaryWave wave = exact_solution(1.4, grid);
  ExperimentOptions options;
  options.sample_interval = 0.5;
  options.record_snapshots = true;
  EvolutionTrace trace = run_experiment({1.0}, wave, 1e-2, 1.0, options);
  REQUIRE(trace.snapshots.size() == trace.snapshot_times.size());
  CHECK(trace.snapshots.size() == 3);
  CHECK(trace.snapshots.front().size() ==
        static_cast<std::size_t>(grid.n_points()));
}
