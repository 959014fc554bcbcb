#ifndef GFBBM_STABILITY_HPP
#define GFBBM_STABILITY_HPP

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <vector>

#include "gfbbm/model.hpp"
#include "gfbbm/solitary.hpp"

namespace gfbbm {

enum class Verdict {
  SpectrallyStable,
  SpectrallyUnstable,
  NoSolitaryWave,
  HamiltonianUndefined,
};

const char* to_string(Verdict verdict);

struct CriticalSpeeds {
  double c1;
  double c2;
};

struct StabilityReport {
  ModelParams params;
  int k_derivative_sign = 0;  // -1/0/+1; 0 when no wave exists
  bool has_roots = false;
  CriticalSpeeds roots{0.0, 0.0};
  // Numeric fields; -1 / NaN until a discretized spectrum fills them in.
  int n_negative = -1;
  double kernel_quality = std::numeric_limits<double>::quiet_NaN();
  double essential_edge = std::numeric_limits<double>::quiet_NaN();
  int n_I = -1;
  Verdict verdict = Verdict::NoSolitaryWave;
};

// K(c) = (c-1)^{2/p} ((5c-3)/(4(c-1)))^{1/alpha}
//        (1 + 5p(c-1)/((5c-3)(alpha(p+2)-p))),
// the momentum of the wave family up to the constant 2^{2/p-1}||phi||^2.
// On the negative branch (c-1)^{2/p} is evaluated as ((c-1)^2)^{1/p}.
double K_of_c(const ModelParams& params);

// Closed-form derivative of K (log-derivative form, valid on both branches).
double dK_dc(const ModelParams& params);

// Roots of dK/dc:
// c_{1,2} = (6a+2p+3ap +- sqrt(2) p sqrt(2a-p+ap)) / (5a(p+2)), c1 > c2.
CriticalSpeeds critical_speeds(double alpha, int p);

// Analytic classification: stable exactly when dK/dc > 0 at an admissible
// (alpha, p, c); the empty strip and the Hamiltonian region get their own
// verdicts.
StabilityReport classify(const ModelParams& params);

enum class OperatorKind { Lc, LcMinus, JLc };

struct OperatorMatrix {
  Eigen::MatrixXd matrix;
  OperatorKind kind;
  ModelParams params;
};

// Dense N x N collocation matrix of the linearized operator about the wave:
// (5c/4 - 3/4) D^alpha + (c-1) - ((p+1)/2) Q^p on the positive branch, and
// its negative-branch counterpart (3/4 - 5c/4) D^alpha + (1-c)
// - ((p+1)/2)(-Q)^p. Exactly symmetric by construction.
OperatorMatrix assemble_Lc(const SolitaryWave& wave, int dense_cap = 1 << 12);

struct SpectrumCounts {
  int n_negative = 0;   // eigenvalues below -eps0, eps0 = 1e-6 * radius
  int n_zero = 0;       // eigenvalues within eps0 of zero
  double kernel_quality = 0.0;  // cosine of near-zero eigenvector with Q'
  // Smallest eigenvalue whose eigenvector fails the localization test
  // (participation ratio above 0.25); NaN when all modes are localized.
  double essential_edge = std::numeric_limits<double>::quiet_NaN();
};

SpectrumCounts spectrum_counts(const OperatorMatrix& op,
                               const SolitaryWave& wave);

// Same counts for an arbitrary symmetric collocation matrix, with the
// kernel compared against a caller-provided reference vector.
SpectrumCounts symmetric_spectrum_counts(
    const Eigen::MatrixXd& matrix, std::span<const double> kernel_reference,
    const SpectralGrid& grid);

// P = D^alpha + 1 - (p+1) phi^p about the normalized ground state; shares
// the eigenvalue counts of L_c through the dilation conjugation.
Eigen::MatrixXd normalized_operator_matrix(const GroundState& gs);

// I = -dF(Q_c)/dc by central differences on re-solved waves at c +- dc.
double momentum_derivative(const ModelParams& params, const SpectralGrid& grid,
                           double dc = 1e-3,
                           const PetviashviliSettings& settings = {});

// Same derivative evaluated through the ground-state scalings
// F(c) = (1/2) A(c)^2 theta(c)^{-1} (||phi||^2
//        + (5/4) theta(c)^alpha ||D^{alpha/2}phi||^2),
// with the phi quadratures taken numerically once. For alpha <= 1/2 near
// c = 1 the waves are too fat-tailed for any feasible periodic box, and the
// direct route drowns in domain truncation; this one stays on the O(1)
// ground-state scale.
double momentum_derivative_scaled(const ModelParams& params,
                                  const GroundState& ground_state,
                                  double dc = 1e-3);

struct GrowingModes {
  std::vector<std::complex<double>> eigenvalues;
  double max_real_part = 0.0;
  double matrix_scale = 0.0;  // infinity norm of the assembled J L_c
};

// Spectrum of (I + (5/4)D^alpha)^{-1} d/dx L_c; eigenvalues off the
// imaginary axis signal spectral instability.
GrowingModes growing_modes(const SolitaryWave& wave, int dense_cap = 1 << 12);

// Dense circulant for a Fourier multiplier given on bins k = 0..N/2 (the
// real part is taken at DC and Nyquist).
Eigen::MatrixXd multiplier_matrix(const SpectralGrid& grid,
                                  const std::vector<Complex>& multiplier);

struct SpectrumReport {
  StabilityReport report;  // analytic fields + numeric counts filled in
  int index = -1;          // n_negative - n_I
  bool verdict_agreement = false;
  double max_re_lambda = std::numeric_limits<double>::quiet_NaN();
};

// Solve, assemble, count, and cross-check against the analytic verdict.
SpectrumReport spectral_stability_report(
    const ModelParams& params, const SpectralGrid& grid,
    const PetviashviliSettings& settings = {}, bool with_growing_modes = false,
    int dense_cap = 1 << 12);

}  // namespace gfbbm

#endif
