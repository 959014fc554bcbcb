#include "gfbbm/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "gfbbm/errors.hpp"

namespace gfbbm {

namespace detail {

// The FFTW planner is not thread safe; plan creation is serialized here.
// Plans are created with FFTW_UNALIGNED on scratch arrays and executed via
// the new-array interface, so concurrent transforms on distinct buffers are
// safe once the plan exists.
class FftPlans {
 public:
  explicit FftPlans(int n) : n_(n) {
    static std::mutex planner_mutex;
    std::lock_guard<std::mutex> lock(planner_mutex);
    double* real_scratch = fftw_alloc_real(n);
    fftw_complex* complex_scratch = fftw_alloc_complex(n / 2 + 1);
    fwd_ = fftw_plan_dft_r2c_1d(n, real_scratch, complex_scratch,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    inv_ = fftw_plan_dft_c2r_1d(n, complex_scratch, real_scratch,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(complex_scratch);
    fftw_free(real_scratch);
    if (!fwd_ || !inv_) throw NumericError("FFTW plan creation failed");
  }

  ~FftPlans() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  void forward(const double* in, Complex* out) const {
    fftw_execute_dft_r2c(fwd_, const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
  }

  // c2r may clobber its input.
  void inverse(Complex* in, double* out) const {
    fftw_execute_dft_c2r(inv_, reinterpret_cast<fftw_complex*>(in), out);
  }

  int n() const { return n_; }

 private:
  int n_;
  fftw_plan fwd_;
  fftw_plan inv_;
};

}  // namespace detail

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_length(std::span<const double> field, const SpectralGrid& grid) {
  if (static_cast<int>(field.size()) != grid.n_points())
    throw DimensionError("field length " + std::to_string(field.size()) +
                         " does not match grid size " +
                         std::to_string(grid.n_points()));
}

}  // namespace

SpectralGrid::SpectralGrid(double half_length, int n_points)
    : half_length_(half_length), n_(n_points) {
  if (!(half_length > 0.0))
    throw ConfigError("half_length must be positive, got " +
                      std::to_string(half_length));
  if (!is_power_of_two(n_points))
    throw ConfigError("n_points must be a power of two, got " +
                      std::to_string(n_points));
  if (n_points < 8)
    throw ConfigError("n_points must be at least 8, got " +
                      std::to_string(n_points));

  nodes_.resize(n_);
  const double dx = spacing();
  for (int i = 0; i < n_; ++i) nodes_[i] = -half_length_ + i * dx;

  wavenumbers_.resize(n_);
  const double dxi = kPi / half_length_;
  for (int k = 0; k < n_ / 2; ++k) wavenumbers_[k] = k * dxi;
  for (int k = n_ / 2; k < n_; ++k) wavenumbers_[k] = (k - n_) * dxi;

  plans_ = std::make_shared<const detail::FftPlans>(n_);
}

double SpectralGrid::xi(int k) const { return kPi * k / half_length_; }

Spectrum SpectralGrid::forward(std::span<const double> field) const {
  check_length(field, *this);
  Spectrum out(spectrum_size());
  plans_->forward(field.data(), out.data());
  return out;
}

std::vector<double> SpectralGrid::inverse(Spectrum spectrum) const {
  if (static_cast<int>(spectrum.size()) != spectrum_size())
    throw DimensionError("spectrum length mismatch");
  std::vector<double> out(n_);
  plans_->inverse(spectrum.data(), out.data());
  const double scale = 1.0 / n_;
  for (double& v : out) v *= scale;
  return out;
}

void SpectralGrid::forward_into(const double* in, Complex* out) const {
  plans_->forward(in, out);
}

void SpectralGrid::inverse_into(Complex* in, double* out) const {
  plans_->inverse(in, out);
  const double scale = 1.0 / n_;
  for (int i = 0; i < n_; ++i) out[i] *= scale;
}

SpectralGrid make_grid(double half_length, int n_points) {
  return SpectralGrid(half_length, n_points);
}

std::vector<double> apply_multiplier(std::span<const double> field,
                                     std::span<const Complex> multiplier,
                                     const SpectralGrid& grid) {
  check_length(field, grid);
  if (static_cast<int>(multiplier.size()) != grid.spectrum_size())
    throw DimensionError("multiplier length mismatch");
  Spectrum spec = grid.forward(field);
  const int last = grid.spectrum_size() - 1;
  spec[0] *= multiplier[0].real();
  for (int k = 1; k < last; ++k) spec[k] *= multiplier[k];
  spec[last] *= multiplier[last].real();
  return grid.inverse(std::move(spec));
}

std::vector<double> apply_symbol(std::span<const double> field,
                                 const std::function<Complex(double)>& symbol,
                                 const SpectralGrid& grid) {
  check_length(field, grid);
  const int m = grid.spectrum_size();
  std::vector<Complex> mult(m);
  std::vector<double> asym(m);
  double max_abs = 0.0;
  for (int k = 0; k < m; ++k) {
    const double xi = grid.xi(k);
    mult[k] = symbol(xi);
    asym[k] = std::abs(symbol(-xi) - std::conj(mult[k]));
    max_abs = std::max(max_abs, std::abs(mult[k]));
  }

  // A conjugate-symmetry defect of size |asym| on the mode pair +-xi_k shows
  // up as an imaginary residue of amplitude |asym|*|u_hat_k|/N in physical
  // space; bound it before discarding the imaginary part.
  Spectrum spec = grid.forward(field);
  double imag_bound = std::abs(mult[0].imag()) * std::abs(spec[0]);
  for (int k = 1; k < m; ++k) imag_bound += asym[k] * std::abs(spec[k]);
  imag_bound /= grid.n_points();

  double field_scale = 0.0;
  for (double v : field) field_scale = std::max(field_scale, std::abs(v));
  const double tol = 1e-10 * std::max(1.0, field_scale) * std::max(1.0, max_abs);
  if (imag_bound > tol)
    throw SymmetryError(
        "symbol violates conjugate symmetry: implied imaginary residue " +
        std::to_string(imag_bound));

  const int last = m - 1;
  spec[0] *= mult[0].real();
  for (int k = 1; k < last; ++k) spec[k] *= mult[k];
  spec[last] *= mult[last].real();
  return grid.inverse(std::move(spec));
}

std::vector<double> fractional_derivative(std::span<const double> field,
                                          double order,
                                          const SpectralGrid& grid) {
  if (order < 0.0) throw ConfigError("derivative order must be >= 0");
  check_length(field, grid);
  const int m = grid.spectrum_size();
  std::vector<Complex> mult(m);
  for (int k = 0; k < m; ++k) mult[k] = std::pow(std::abs(grid.xi(k)), order);
  return apply_multiplier(field, mult, grid);
}

std::vector<double> invert_bbm_operator(std::span<const double> field,
                                        double alpha,
                                        const SpectralGrid& grid) {
  check_length(field, grid);
  const int m = grid.spectrum_size();
  std::vector<Complex> mult(m);
  for (int k = 0; k < m; ++k)
    mult[k] = 1.0 / (1.0 + 1.25 * std::pow(std::abs(grid.xi(k)), alpha));
  return apply_multiplier(field, mult, grid);
}

std::vector<double> spectral_derivative(std::span<const double> field,
                                        const SpectralGrid& grid) {
  check_length(field, grid);
  const int m = grid.spectrum_size();
  std::vector<Complex> mult(m);
  for (int k = 0; k < m; ++k) mult[k] = Complex(0.0, grid.xi(k));
  return apply_multiplier(field, mult, grid);
}

std::vector<double> translate(std::span<const double> field, double shift,
                              const SpectralGrid& grid) {
  check_length(field, grid);
  const int m = grid.spectrum_size();
  std::vector<Complex> mult(m);
  for (int k = 0; k < m; ++k) {
    const double phase = -grid.xi(k) * shift;
    mult[k] = Complex(std::cos(phase), std::sin(phase));
  }
  return apply_multiplier(field, mult, grid);
}

double eval_series(const Spectrum& spectrum, double x,
                   const SpectralGrid& grid) {
  const int n = grid.n_points();
  if (static_cast<int>(spectrum.size()) != grid.spectrum_size())
    throw DimensionError("spectrum length mismatch");
  const double y = x + grid.half_length();
  double acc = spectrum[0].real();
  const int last = grid.spectrum_size() - 1;
  for (int k = 1; k < last; ++k) {
    const double phase = grid.xi(k) * y;
    acc += 2.0 * (spectrum[k].real() * std::cos(phase) -
                  spectrum[k].imag() * std::sin(phase));
  }
  acc += spectrum[last].real() * std::cos(grid.xi(last) * y);
  return acc / n;
}

double quadrature(std::span<const double> field, const SpectralGrid& grid) {
  check_length(field, grid);
  double acc = 0.0;
  for (double v : field) acc += v;
  return acc * grid.spacing();
}

double quadrature_sq(std::span<const double> field, const SpectralGrid& grid) {
  check_length(field, grid);
  double acc = 0.0;
  for (double v : field) acc += v * v;
  return acc * grid.spacing();
}

double spectral_norm_sq(const Spectrum& spectrum, const SpectralGrid& grid) {
  if (static_cast<int>(spectrum.size()) != grid.spectrum_size())
    throw DimensionError("spectrum length mismatch");
  const int last = grid.spectrum_size() - 1;
  double acc = std::norm(spectrum[0]);
  for (int k = 1; k < last; ++k) acc += 2.0 * std::norm(spectrum[k]);
  acc += std::norm(spectrum[last]);
  return acc * grid.spacing() / grid.n_points();
}

double spectral_tail_fraction(std::span<const double> field,
                              const SpectralGrid& grid) {
  Spectrum spec = grid.forward(field);
  const int m = grid.spectrum_size();
  const int cut = (2 * (m - 1)) / 3;
  double peak = 0.0, tail = 0.0;
  for (int k = 0; k < m; ++k) peak = std::max(peak, std::abs(spec[k]));
  for (int k = cut; k < m; ++k) tail = std::max(tail, std::abs(spec[k]));
  if (peak == 0.0) return 0.0;
  return tail / peak;
}

}  // namespace gfbbm
