#include "gfbbm/stability.hpp"

#include <algorithm>
#include <cmath>

#include "gfbbm/conserved.hpp"

namespace gfbbm {

namespace {

// c in [3/5, 1] (no wave) and the Hamiltonian region raise before any K
// evaluation; call only with validated params.
void check_K_domain(const ModelParams& params) {
  params.validate();
  if (!params.hamiltonian_defined())
    throw HamiltonianError("Hamiltonian is not well-defined: alpha=" +
                           std::to_string(params.alpha) +
                           " <= p/(p+2)=" + std::to_string(params.p / (params.p + 2.0)));
  if (params.c >= 0.6 && params.c <= 1.0)
    throw ExistenceError("no solitary wave exists for 3/5 <= c <= 1 (c=" +
                         std::to_string(params.c) + ")");
}

}  // namespace

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::SpectrallyStable: return "SpectrallyStable";
    case Verdict::SpectrallyUnstable: return "SpectrallyUnstable";
    case Verdict::NoSolitaryWave: return "NoSolitaryWave";
    case Verdict::HamiltonianUndefined: return "HamiltonianUndefined";
  }
  return "unknown";
}

double K_of_c(const ModelParams& params) {
  check_K_domain(params);
  const double c = params.c, alpha = params.alpha;
  const double p = params.p;
  const double cm1 = c - 1.0;
  const double denom = alpha * (p + 2.0) - p;
  const double base1 = std::pow(cm1 * cm1, 1.0 / p);
  const double ratio = (5.0 * c - 3.0) / (4.0 * cm1);
  const double base2 = std::pow(ratio, 1.0 / alpha);
  const double tail = 1.0 + 5.0 * p * cm1 / ((5.0 * c - 3.0) * denom);
  return base1 * base2 * tail;
}

double dK_dc(const ModelParams& params) {
  check_K_domain(params);
  const double c = params.c, alpha = params.alpha;
  const double p = params.p;
  const double cm1 = c - 1.0;
  const double denom = alpha * (p + 2.0) - p;
  const double tail = 1.0 + 5.0 * p * cm1 / ((5.0 * c - 3.0) * denom);
  const double tail_prime = (5.0 * p / denom) * 2.0 /
                            ((5.0 * c - 3.0) * (5.0 * c - 3.0));
  const double log_deriv = 2.0 / (p * cm1) +
                           (1.0 / alpha) * (5.0 / (5.0 * c - 3.0) - 1.0 / cm1) +
                           tail_prime / tail;
  return K_of_c(params) * log_deriv;
}

CriticalSpeeds critical_speeds(double alpha, int p) {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (p < 1) throw ConfigError("p must be a positive integer");
  const double pd = p;
  const double radicand = 2.0 * alpha - pd + alpha * pd;
  if (radicand < 0.0)
    throw ExistenceError("dK/dc has no real root: 2*alpha - p + alpha*p = " +
                         std::to_string(radicand) + " < 0");
  const double root = std::sqrt(2.0) * pd * std::sqrt(radicand);
  const double head = 6.0 * alpha + 2.0 * pd + 3.0 * alpha * pd;
  const double denom = 5.0 * alpha * (pd + 2.0);
  return {(head + root) / denom, (head - root) / denom};
}

StabilityReport classify(const ModelParams& params) {
  params.validate();
  StabilityReport report;
  report.params = params;

  if (!params.hamiltonian_defined()) {
    report.verdict = Verdict::HamiltonianUndefined;
    return report;
  }

  report.roots = critical_speeds(params.alpha, params.p);
  report.has_roots = true;

  if (params.branch() == Branch::None) {
    report.verdict = Verdict::NoSolitaryWave;
    return report;
  }

  const double slope = dK_dc(params);
  report.k_derivative_sign = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);
  report.n_negative = 1;  // n(L_c) = 1 wherever the wave exists
  report.n_I = slope > 0.0 ? 1 : 0;
  report.verdict = slope > 0.0 ? Verdict::SpectrallyStable
                               : Verdict::SpectrallyUnstable;
  return report;
}

Eigen::MatrixXd multiplier_matrix(const SpectralGrid& grid,
                                  const std::vector<Complex>& multiplier) {
  const int n = grid.n_points();
  Spectrum spec(multiplier.begin(), multiplier.end());
  if (static_cast<int>(spec.size()) != grid.spectrum_size())
    throw DimensionError("multiplier length mismatch");
  spec[0] = spec[0].real();
  spec.back() = spec.back().real();
  // First column of F^{-1} diag(m) F; the rest are circular shifts.
  std::vector<double> col0 = grid.inverse(std::move(spec));
  Eigen::MatrixXd out(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) out(j, l) = col0[(j - l + n) % n];
  return out;
}

OperatorMatrix assemble_Lc(const SolitaryWave& wave, int dense_cap) {
  const SpectralGrid& grid = wave.grid;
  const int n = grid.n_points();
  if (n > dense_cap)
    throw ResourceError("dense assembly capped at N=" +
                        std::to_string(dense_cap) + ", requested N=" +
                        std::to_string(n));

  const ModelParams& pr = wave.params;
  const Branch branch = pr.branch();
  double coef_frac, coef_id;
  if (branch == Branch::Positive) {
    coef_frac = (5.0 * pr.c - 3.0) / 4.0;
    coef_id = pr.c - 1.0;
  } else if (branch == Branch::Negative) {
    coef_frac = (3.0 - 5.0 * pr.c) / 4.0;
    coef_id = 1.0 - pr.c;
  } else {
    throw ExistenceError("no linearized operator: no wave at c=" +
                         std::to_string(pr.c));
  }

  std::vector<Complex> mult(grid.spectrum_size());
  for (int k = 0; k < grid.spectrum_size(); ++k)
    mult[k] = coef_frac * std::pow(std::abs(grid.xi(k)), pr.alpha) + coef_id;
  Eigen::MatrixXd m = multiplier_matrix(grid, mult);

  const double half_pp1 = 0.5 * (pr.p + 1);
  for (int i = 0; i < n; ++i) {
    // |Q|^p on the negative branch (the operator is stated for -Q there).
    double qp = branch == Branch::Negative ? -wave.profile[i]
                                           : wave.profile[i];
    double acc = qp;
    for (int j = 1; j < pr.p; ++j) acc *= qp;
    m(i, i) -= half_pp1 * acc;
  }
  return {std::move(m),
          branch == Branch::Positive ? OperatorKind::Lc : OperatorKind::LcMinus,
          pr};
}

SpectrumCounts symmetric_spectrum_counts(
    const Eigen::MatrixXd& matrix, std::span<const double> kernel_reference,
    const SpectralGrid& grid) {
  const int n = grid.n_points();
  if (matrix.rows() != n || matrix.cols() != n)
    throw DimensionError("matrix size does not match grid");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix);
  if (solver.info() != Eigen::Success)
    throw NumericError("symmetric eigensolver failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  const double radius =
      std::max(std::abs(values(0)), std::abs(values(n - 1)));
  const double eps0 = 1e-6 * radius;

  SpectrumCounts counts;
  int kernel_index = 0;
  for (int i = 0; i < n; ++i) {
    if (values(i) < -eps0) ++counts.n_negative;
    if (std::abs(values(i)) <= eps0) ++counts.n_zero;
    if (std::abs(values(i)) < std::abs(values(kernel_index))) kernel_index = i;
  }

  Eigen::Map<const Eigen::VectorXd> ref(kernel_reference.data(),
                                        kernel_reference.size());
  if (ref.size() == n && ref.norm() > 0.0) {
    counts.kernel_quality =
        std::abs(vectors.col(kernel_index).dot(ref)) / ref.norm();
  }

  for (int i = 0; i < n; ++i) {
    const double pr = 1.0 / (n * vectors.col(i).array().square().square().sum());
    if (pr > 0.25) {
      counts.essential_edge = values(i);
      break;
    }
  }
  return counts;
}

SpectrumCounts spectrum_counts(const OperatorMatrix& op,
                               const SolitaryWave& wave) {
  if (op.kind == OperatorKind::JLc)
    throw ConfigError("spectrum_counts requires a symmetric operator kind");
  std::vector<double> qprime = spectral_derivative(wave.profile, wave.grid);
  return symmetric_spectrum_counts(op.matrix, qprime, wave.grid);
}

Eigen::MatrixXd normalized_operator_matrix(const GroundState& gs) {
  const SpectralGrid& grid = gs.grid;
  std::vector<Complex> mult(grid.spectrum_size());
  for (int k = 0; k < grid.spectrum_size(); ++k)
    mult[k] = std::pow(std::abs(grid.xi(k)), gs.alpha) + 1.0;
  Eigen::MatrixXd m = multiplier_matrix(grid, mult);
  for (int i = 0; i < grid.n_points(); ++i) {
    double acc = gs.profile[i];
    for (int j = 1; j < gs.p; ++j) acc *= gs.profile[i];
    m(i, i) -= (gs.p + 1.0) * acc;
  }
  return m;
}

double momentum_derivative(const ModelParams& params, const SpectralGrid& grid,
                           double dc, const PetviashviliSettings& settings) {
  if (!(dc > 0.0)) throw ConfigError("dc must be positive");
  ModelParams plus = params, minus = params;
  plus.c += dc;
  minus.c -= dc;
  const SolitaryWave wave_plus = solve_petviashvili(plus, grid, settings);
  const SolitaryWave wave_minus = solve_petviashvili(minus, grid, settings);
  const double f_plus = momentum(wave_plus.profile, params.alpha, grid);
  const double f_minus = momentum(wave_minus.profile, params.alpha, grid);
  return -(f_plus - f_minus) / (2.0 * dc);
}

double momentum_derivative_scaled(const ModelParams& params,
                                  const GroundState& ground_state,
                                  double dc) {
  if (!(dc > 0.0)) throw ConfigError("dc must be positive");
  params.validate();
  if (ground_state.p != params.p)
    throw ConfigError("ground state solved for a different p");
  if (std::abs(ground_state.alpha - params.alpha) > 1e-14)
    throw ConfigError("ground state solved for a different alpha");

  const double phi_sq =
      quadrature_sq(ground_state.profile, ground_state.grid);
  std::vector<double> half = fractional_derivative(
      ground_state.profile, params.alpha / 2.0, ground_state.grid);
  const double half_sq = quadrature_sq(half, ground_state.grid);

  const auto f_of_c = [&](double c) {
    const ModelParams at{params.alpha, params.p, c};
    const GroundStateMap map = GroundStateMap::from(at);
    const double amp_sq = map.amplitude_factor * map.amplitude_factor;
    const double theta = map.length_factor;
    return 0.5 * amp_sq / theta *
           (phi_sq + 1.25 * std::pow(theta, params.alpha) * half_sq);
  };
  return -(f_of_c(params.c + dc) - f_of_c(params.c - dc)) / (2.0 * dc);
}

GrowingModes growing_modes(const SolitaryWave& wave, int dense_cap) {
  const SpectralGrid& grid = wave.grid;
  const int n = grid.n_points();
  if (n > dense_cap)
    throw ResourceError("dense assembly capped at N=" +
                        std::to_string(dense_cap) + ", requested N=" +
                        std::to_string(n));
  const ModelParams& pr = wave.params;

  // The linearization of the flow itself: always the signed-profile form
  // (5c/4-3/4) D^alpha + (c-1) - ((p+1)/2) Q^p, both branches.
  std::vector<Complex> mult(grid.spectrum_size());
  const double coef_frac = (5.0 * pr.c - 3.0) / 4.0;
  for (int k = 0; k < grid.spectrum_size(); ++k)
    mult[k] = coef_frac * std::pow(std::abs(grid.xi(k)), pr.alpha) +
              (pr.c - 1.0);
  Eigen::MatrixXd lin = multiplier_matrix(grid, mult);
  for (int i = 0; i < n; ++i) {
    double acc = wave.profile[i];
    for (int j = 1; j < pr.p; ++j) acc *= wave.profile[i];
    lin(i, i) -= 0.5 * (pr.p + 1) * acc;
  }

  std::vector<Complex> d_mult(grid.spectrum_size()), inv_mult(grid.spectrum_size());
  for (int k = 0; k < grid.spectrum_size(); ++k) {
    d_mult[k] = Complex(0.0, grid.xi(k));
    inv_mult[k] = 1.0 / (1.0 + 1.25 * std::pow(std::abs(grid.xi(k)), pr.alpha));
  }
  Eigen::MatrixXd j_op =
      multiplier_matrix(grid, inv_mult) * multiplier_matrix(grid, d_mult);

  Eigen::MatrixXd full = j_op * lin;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(full, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NumericError("general eigensolver failed");

  GrowingModes out;
  out.eigenvalues.resize(n);
  out.max_real_part = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    out.eigenvalues[i] = solver.eigenvalues()(i);
    out.max_real_part = std::max(out.max_real_part,
                                 solver.eigenvalues()(i).real());
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const Complex& a, const Complex& b) {
              return a.imag() != b.imag() ? a.imag() < b.imag()
                                          : a.real() < b.real();
            });
  out.matrix_scale = full.cwiseAbs().rowwise().sum().maxCoeff();
  return out;
}

SpectrumReport spectral_stability_report(const ModelParams& params,
                                         const SpectralGrid& grid,
                                         const PetviashviliSettings& settings,
                                         bool with_growing_modes,
                                         int dense_cap) {
  if (grid.n_points() > dense_cap)
    throw ResourceError("dense assembly capped at N=" +
                        std::to_string(dense_cap) + ", requested N=" +
                        std::to_string(grid.n_points()));
  SpectrumReport out;
  out.report = classify(params);
  if (out.report.verdict == Verdict::NoSolitaryWave ||
      out.report.verdict == Verdict::HamiltonianUndefined)
    return out;

  const SolitaryWave wave = solve_petviashvili(params, grid, settings);
  const OperatorMatrix op = assemble_Lc(wave, dense_cap);
  const SpectrumCounts counts = spectrum_counts(op, wave);
  out.report.n_negative = counts.n_negative;
  out.report.kernel_quality = counts.kernel_quality;
  out.report.essential_edge = counts.essential_edge;
  out.index = counts.n_negative - out.report.n_I;
  out.verdict_agreement =
      (out.index == 0) == (out.report.verdict == Verdict::SpectrallyStable);
  if (with_growing_modes)
    out.max_re_lambda = growing_modes(wave, dense_cap).max_real_part;
  return out;
}

}  // namespace gfbbm
