#ifndef GFBBM_EVOLUTION_HPP
#define GFBBM_EVOLUTION_HPP

#include <span>
#include <vector>

#include "gfbbm/conserved.hpp"
#include "gfbbm/model.hpp"
#include "gfbbm/solitary.hpp"
#include "gfbbm/spectral.hpp"

namespace gfbbm {

struct EvolutionState {
  std::vector<double> field;
  double time = 0.0;
  long step_count = 0;
};

struct InvariantRecord {
  double time = 0.0;
  double mass = 0.0;      // I
  double momentum = 0.0;  // F
  double energy = 0.0;    // H
};

InvariantRecord invariants(const EvolutionState& state,
                           const ModelParams& params, const SpectralGrid& grid);

struct EvolverOptions {
  // Drop the nonlinear term (pure dispersive flow); used for convergence
  // studies against the exact propagator.
  bool linear_only = false;
};

// Fourier pseudo-spectral discretization of
//   u_t = -(I + (3/4)D^alpha)(I + (5/4)D^alpha)^{-1} u_x
//         - (1/2)(I + (5/4)D^alpha)^{-1} (u^{p+1})_x
// with classical RK4 in time. The linear phase speed lies in (3/5, 1], so
// RK4 stability is governed by max|omega(xi)|*dt <= 2.8; violating it is a
// configuration error. One Evolver drives one trajectory at a time
// (scratch buffers are reused across steps); independent trajectories get
// independent Evolvers.
class Evolver {
 public:
  Evolver(const ModelParams& params, const SpectralGrid& grid, double dt,
          const EvolverOptions& options = {});

  const SpectralGrid& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  double dt() const { return dt_; }
  double max_abs_omega() const { return max_omega_; }

  std::vector<double> rhs(std::span<const double> u) const;
  void step(EvolutionState& state);
  // Exact flow of the linear part: spectrum multiplied by
  // exp(-i t xi (1 + (3/4)|xi|^alpha)/(1 + (5/4)|xi|^alpha)).
  std::vector<double> linear_propagate(std::span<const double> u,
                                       double t) const;

 private:
  void rhs_into(const double* u, double* out) const;

  ModelParams params_;
  SpectralGrid grid_;
  double dt_;
  bool linear_only_;
  double max_omega_ = 0.0;
  std::vector<double> omega_;      // omega(xi_k), Nyquist zeroed
  std::vector<double> nl_factor_;  // (1/2) xi /(1 + (5/4)|xi|^alpha), Nyquist zeroed
  // step scratch
  std::vector<double> k1_, k2_, k3_, k4_, stage_;
};

std::vector<double> linear_propagator(std::span<const double> field,
                                      const ModelParams& params,
                                      const SpectralGrid& grid, double t);

struct PerturbationSpec {
  double gamma = 1.1;

  void validate() const {
    if (!(gamma > 0.0)) throw ConfigError("gamma must be positive");
  }
};

struct OrbitalDistance {
  double distance;  // min over shifts of the F-weighted norm of u - Q(.-x0)
  double shift;     // optimal x0 in [-L, L)
};

// Definition of orbital distance: cross-correlation in the F-weighted inner
// product locates the best grid shift, golden-section refines it.
OrbitalDistance orbital_distance(std::span<const double> u,
                                 std::span<const double> reference,
                                 double alpha, const SpectralGrid& grid);

struct ExperimentOptions {
  double sample_interval = 0.5;
  bool record_snapshots = false;
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> peak_amplitude;  // signed field value at the extremum
  std::vector<double> peak_location;
  std::vector<double> orbital_dist;
  std::vector<InvariantRecord> invariant_series;
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> snapshots;
  bool aliasing_warning = false;
};

// The perturbation experiment: evolve u0 = gamma * Q_c and record peak,
// orbital distance and the invariants at the sample times.
EvolutionTrace run_experiment(const PerturbationSpec& spec,
                              const SolitaryWave& base_wave, double dt,
                              double t_final,
                              const ExperimentOptions& options = {});

}  // namespace gfbbm

#endif
