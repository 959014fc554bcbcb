#ifndef GFBBM_SOLITARY_HPP
#define GFBBM_SOLITARY_HPP

#include <span>
#include <vector>

#include "gfbbm/model.hpp"
#include "gfbbm/spectral.hpp"

namespace gfbbm {

struct PetviashviliSettings {
  double tolerance = 1e-12;
  int max_iterations = 500;
  // Stabilizing-factor exponent; 0 selects the default (p+1)/p.
  double nu = 0.0;
  // Gaussian seed A*exp(-x^2/w^2); zeros select the branch defaults.
  double guess_amplitude = 0.0;
  double guess_width = 0.0;
  // Explicit seed profile (overrides the Gaussian when nonempty).
  std::vector<double> initial_guess;

  void validate() const {
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (max_iterations < 1)
      throw ConfigError("max_iterations must be at least 1");
  }
};

// A converged solitary-wave profile, centered so the extremum sits at x = 0.
struct SolitaryWave {
  ModelParams params;
  SpectralGrid grid;
  std::vector<double> profile;
  // Max-norm of the profile equation (5c-3)/4 D^alpha Q + (c-1) Q - Q^{p+1}/2
  // at the samples.
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> stabilizing_factor_history;
  // Raised when the boundary value exceeds 1e-8 of the peak (domain likely
  // too small for the algebraic tails of fractional waves).
  bool domain_warning = false;
  // Raised when the top third of the spectrum of Q^{p+1} exceeds 1e-12.
  bool aliasing_warning = false;
  double even_symmetry_defect = 0.0;
};

// The normalized ground state: D^alpha phi + phi - phi^{p+1} = 0, phi > 0.
struct GroundState {
  double alpha;
  int p;
  SpectralGrid grid;
  std::vector<double> profile;
  double residual = 0.0;
  int iterations = 0;
};

// Scalings connecting the ground state to the solitary wave:
// Q_c(x) = sign * amplitude_factor * phi(length_factor * x).
struct GroundStateMap {
  double amplitude_factor;  // (2|c-1|)^{1/p}
  double length_factor;     // theta = (4(c-1)/(5c-3))^{1/alpha}
  double sign;              // +1 positive branch, -1 negative branch

  static GroundStateMap from(const ModelParams& params);
};

// Petviashvili iteration for either branch. The negative branch is iterated
// on the reflected equation for -Q (all-positive linear part) and negated.
SolitaryWave solve_petviashvili(const ModelParams& params,
                                const SpectralGrid& grid,
                                const PetviashviliSettings& settings = {});

// The closed form 3(c-1) sech^2( sqrt(4(c-1)/(5c-3)) x / 2 ) at alpha=2, p=1.
SolitaryWave exact_solution(double c, const SpectralGrid& grid);

GroundState solve_ground_state(double alpha, int p, const SpectralGrid& grid,
                               const PetviashviliSettings& settings = {});

// Builds Q_c from a normalized ground-state profile by the amplitude/length
// scalings; resampling is spectral.
SolitaryWave ground_state_rescale(std::span<const double> normalized_profile,
                                  const SpectralGrid& profile_grid,
                                  const ModelParams& params,
                                  const SpectralGrid& grid);

// out(x) = amplitude * in(theta * x), evaluated through the trigonometric
// interpolant of `in`; requires theta * L_out <= L_in.
std::vector<double> resample_scaled(std::span<const double> in,
                                    const SpectralGrid& in_grid,
                                    double amplitude, double theta,
                                    const SpectralGrid& out_grid);

struct PohozaevRatio {
  double measured;
  double predicted;
};

// Solution-quality check: integral of |D^{alpha/2}Q|^2 over integral of Q^2
// against its closed form 4p(c-1)/((5c-3)(alpha(p+2)-p)).
PohozaevRatio pohozaev_ratio(const SolitaryWave& wave);

// Max-norm of (5c-3)/4 D^alpha Q + (c-1) Q - Q^{p+1}/2 on the grid.
double equation_residual(std::span<const double> profile,
                         const ModelParams& params, const SpectralGrid& grid);

// Sub-grid location and value of the extremum of |field| (spectral
// refinement of the best node).
struct PeakInfo {
  double location;
  double value;  // signed field value at the peak
};
PeakInfo locate_peak(std::span<const double> field, const SpectralGrid& grid);

// Circularly shifts the field so the extremum of |field| sits at x = 0.
std::vector<double> center_at_peak(std::span<const double> field,
                                   const SpectralGrid& grid);

}  // namespace gfbbm

#endif
