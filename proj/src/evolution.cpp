#include "gfbbm/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gfbbm {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

double mass(std::span<const double> u, const SpectralGrid& grid) {
  return quadrature(u, grid);
}

double f_norm_sq(std::span<const double> v, double alpha,
                 const SpectralGrid& grid) {
  Spectrum spec = grid.forward(v);
  const int last = grid.spectrum_size() - 1;
  double acc = std::norm(spec[0]);
  for (int k = 1; k < last; ++k) {
    const double weight = 1.0 + 1.25 * std::pow(grid.xi(k), alpha);
    acc += 2.0 * weight * std::norm(spec[k]);
  }
  acc += (1.0 + 1.25 * std::pow(grid.xi(last), alpha)) * std::norm(spec[last]);
  return acc * grid.spacing() / grid.n_points();
}

double momentum(std::span<const double> u, double alpha,
                const SpectralGrid& grid) {
  return 0.5 * f_norm_sq(u, alpha, grid);
}

double energy(std::span<const double> u, const ModelParams& params,
              const SpectralGrid& grid) {
  Spectrum spec = grid.forward(u);
  const int last = grid.spectrum_size() - 1;
  double frac = 0.0;
  for (int k = 1; k < last; ++k)
    frac += 2.0 * std::pow(grid.xi(k), params.alpha) * std::norm(spec[k]);
  frac += std::pow(grid.xi(last), params.alpha) * std::norm(spec[last]);
  frac *= grid.spacing() / grid.n_points();

  double quad = 0.0;
  for (double v : u) {
    double pw = v * v;  // u^{p+2} = (u)^{p+2}
    for (int j = 0; j < params.p; ++j) pw *= v;
    quad += v * v + pw / (params.p + 2.0);
  }
  quad *= grid.spacing();
  return -0.5 * (quad + 0.75 * frac);
}

InvariantRecord invariants(const EvolutionState& state,
                           const ModelParams& params,
                           const SpectralGrid& grid) {
  return {state.time, mass(state.field, grid),
          momentum(state.field, params.alpha, grid),
          energy(state.field, params, grid)};
}

Evolver::Evolver(const ModelParams& params, const SpectralGrid& grid,
                 double dt, const EvolverOptions& options)
    : params_(params),
      grid_(grid),
      dt_(dt),
      linear_only_(options.linear_only) {
  params_.validate();
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");

  const int m = grid_.spectrum_size();
  omega_.resize(m);
  nl_factor_.resize(m);
  for (int k = 0; k < m; ++k) {
    const double xi = grid_.xi(k);
    const double frac = std::pow(xi, params_.alpha);
    const double denom = 1.0 + 1.25 * frac;
    omega_[k] = xi * (1.0 + 0.75 * frac) / denom;
    nl_factor_[k] = 0.5 * xi / denom;
    max_omega_ = std::max(max_omega_, std::abs(omega_[k]));
  }
  // The i*xi factor is odd; its Nyquist contribution is zeroed.
  omega_[m - 1] = 0.0;
  nl_factor_[m - 1] = 0.0;

  if (max_omega_ * dt_ > 2.8)
    throw ConfigError(
        "RK4 stability bound violated: max|omega|*dt = " +
        std::to_string(max_omega_ * dt_) +
        " > 2.8; reduce dt below " + std::to_string(2.8 / max_omega_));

  const int n = grid_.n_points();
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  stage_.resize(n);
}

void Evolver::rhs_into(const double* u, double* out) const {
  const int n = grid_.n_points();
  const int m = grid_.spectrum_size();
  thread_local std::vector<Complex> uhat, nlhat;
  thread_local std::vector<double> nl;
  uhat.resize(m);
  grid_.forward_into(u, uhat.data());

  if (!linear_only_) {
    nl.resize(n);
    nlhat.resize(m);
    const int pp1 = params_.p + 1;
    for (int i = 0; i < n; ++i) {
      double acc = u[i];
      for (int j = 1; j < pp1; ++j) acc *= u[i];
      nl[i] = acc;
    }
    if (!all_finite(nl))
      throw BlowUpError("overflow in u^{p+1}",
                        std::numeric_limits<double>::quiet_NaN());
    grid_.forward_into(nl.data(), nlhat.data());
    // u_hat_t = -i [ omega u_hat + nl_factor nl_hat ]
    for (int k = 0; k < m; ++k) {
      const Complex z = omega_[k] * uhat[k] + nl_factor_[k] * nlhat[k];
      uhat[k] = Complex(z.imag(), -z.real());
    }
  } else {
    for (int k = 0; k < m; ++k) {
      const Complex z = omega_[k] * uhat[k];
      uhat[k] = Complex(z.imag(), -z.real());
    }
  }
  grid_.inverse_into(uhat.data(), out);
}

std::vector<double> Evolver::rhs(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != grid_.n_points())
    throw DimensionError("field length mismatch");
  std::vector<double> out(grid_.n_points());
  rhs_into(u.data(), out.data());
  return out;
}

void Evolver::step(EvolutionState& state) {
  const int n = grid_.n_points();
  if (static_cast<int>(state.field.size()) != n)
    throw DimensionError("state field length mismatch");
  double* u = state.field.data();

  try {
    rhs_into(u, k1_.data());
    for (int i = 0; i < n; ++i) stage_[i] = u[i] + 0.5 * dt_ * k1_[i];
    rhs_into(stage_.data(), k2_.data());
    for (int i = 0; i < n; ++i) stage_[i] = u[i] + 0.5 * dt_ * k2_[i];
    rhs_into(stage_.data(), k3_.data());
    for (int i = 0; i < n; ++i) stage_[i] = u[i] + dt_ * k3_[i];
    rhs_into(stage_.data(), k4_.data());
  } catch (const BlowUpError&) {
    throw BlowUpError("overflow in u^{p+1} during stage evaluation",
                      state.time);
  }

  const double w = dt_ / 6.0;
  bool finite = true;
  for (int i = 0; i < n; ++i) {
    u[i] += w * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    finite = finite && std::isfinite(u[i]);
  }
  if (!finite)
    throw BlowUpError("non-finite field after step", state.time);
  ++state.step_count;
  state.time = state.step_count * dt_;
}

std::vector<double> Evolver::linear_propagate(std::span<const double> u,
                                              double t) const {
  if (static_cast<int>(u.size()) != grid_.n_points())
    throw DimensionError("field length mismatch");
  Spectrum spec = grid_.forward(u);
  const int m = grid_.spectrum_size();
  for (int k = 0; k < m; ++k) {
    const double phase = -omega_[k] * t;
    spec[k] *= Complex(std::cos(phase), std::sin(phase));
  }
  return grid_.inverse(std::move(spec));
}

std::vector<double> linear_propagator(std::span<const double> field,
                                      const ModelParams& params,
                                      const SpectralGrid& grid, double t) {
  // Planning through an Evolver keeps one implementation of the symbol;
  // dt is irrelevant here.
  Evolver ev(params, grid, 1e-12, {.linear_only = true});
  return ev.linear_propagate(field, t);
}

OrbitalDistance orbital_distance(std::span<const double> u,
                                 std::span<const double> reference,
                                 double alpha, const SpectralGrid& grid) {
  if (static_cast<int>(u.size()) != grid.n_points() ||
      static_cast<int>(reference.size()) != grid.n_points())
    throw DimensionError("field length mismatch");
  const int m = grid.spectrum_size();
  const int n = grid.n_points();
  Spectrum uhat = grid.forward(u);
  Spectrum qhat = grid.forward(reference);

  std::vector<Complex> cross(m);
  double u_norm = 0.0, q_norm = 0.0;
  for (int k = 0; k < m; ++k) {
    const double weight = 1.0 + 1.25 * std::pow(grid.xi(k), alpha);
    const double pair = (k == 0 || k == m - 1) ? 1.0 : 2.0;
    cross[k] = weight * uhat[k] * std::conj(qhat[k]);
    u_norm += pair * weight * std::norm(uhat[k]);
    q_norm += pair * weight * std::norm(qhat[k]);
  }
  const double scale = grid.spacing() / n;
  u_norm *= scale;
  q_norm *= scale;

  // <u, Q(.-a)>_F as a trigonometric polynomial of the shift a; its values
  // at the grid shifts come from one inverse transform.
  std::vector<double> corr = grid.inverse(Spectrum(cross));
  int best = 0;
  for (int j = 1; j < n; ++j)
    if (corr[j] > corr[best]) best = j;

  const auto corr_at = [&](double a) {
    double acc = cross[0].real();
    for (int k = 1; k < m - 1; ++k) {
      const double phase = grid.xi(k) * a;
      acc += 2.0 * (cross[k].real() * std::cos(phase) -
                    cross[k].imag() * std::sin(phase));
    }
    acc += cross[m - 1].real() * std::cos(grid.xi(m - 1) * a);
    return acc * scale;
  };

  const double gr = 0.61803398874989485;
  const double a0 = best * grid.spacing();
  double lo = a0 - grid.spacing(), hi = a0 + grid.spacing();
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = corr_at(x1), f2 = corr_at(x2);
  while (hi - lo > 1e-12 * std::max(1.0, grid.half_length())) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = corr_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = corr_at(x1);
    }
  }
  const double a_best = 0.5 * (lo + hi);
  const double d_sq = u_norm + q_norm - 2.0 * corr_at(a_best);

  double shift = std::fmod(a_best + grid.half_length(),
                           2.0 * grid.half_length());
  if (shift < 0.0) shift += 2.0 * grid.half_length();
  shift -= grid.half_length();
  return {std::sqrt(std::max(d_sq, 0.0)), shift};
}

EvolutionTrace run_experiment(const PerturbationSpec& spec,
                              const SolitaryWave& base_wave, double dt,
                              double t_final,
                              const ExperimentOptions& options) {
  spec.validate();
  if (!(t_final > 0.0)) throw ConfigError("t_final must be positive");
  if (!(options.sample_interval > 0.0))
    throw ConfigError("sample_interval must be positive");

  const SpectralGrid& grid = base_wave.grid;
  Evolver evolver(base_wave.params, grid, dt);

  EvolutionState state;
  state.field.resize(grid.n_points());
  for (int i = 0; i < grid.n_points(); ++i)
    state.field[i] = spec.gamma * base_wave.profile[i];

  const long total_steps = std::llround(t_final / dt);
  const long sample_every =
      std::max<long>(1, std::llround(options.sample_interval / dt));

  EvolutionTrace trace;
  const auto record = [&]() {
    trace.times.push_back(state.time);
    const PeakInfo peak = locate_peak(state.field, grid);
    trace.peak_amplitude.push_back(peak.value);
    trace.peak_location.push_back(peak.location);
    trace.orbital_dist.push_back(
        orbital_distance(state.field, base_wave.profile,
                         base_wave.params.alpha, grid)
            .distance);
    trace.invariant_series.push_back(
        invariants(state, base_wave.params, grid));
    std::vector<double> nl(state.field);
    for (double& v : nl) {
      double acc = v;
      for (int j = 0; j < base_wave.params.p; ++j) acc *= v;
      v = acc;
    }
    trace.aliasing_warning =
        trace.aliasing_warning || spectral_tail_fraction(nl, grid) > 1e-12;
    if (options.record_snapshots) {
      trace.snapshot_times.push_back(state.time);
      trace.snapshots.push_back(state.field);
    }
  };

  record();
  for (long s = 1; s <= total_steps; ++s) {
    evolver.step(state);
    if (s % sample_every == 0 || s == total_steps) record();
  }
  return trace;
}

}  // namespace gfbbm
