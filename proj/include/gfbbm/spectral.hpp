#ifndef GFBBM_SPECTRAL_HPP
#define GFBBM_SPECTRAL_HPP

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace gfbbm {

using Complex = std::complex<double>;
// Half spectrum of a real field, bins k = 0..N/2 at xi_k = pi*k/L.
using Spectrum = std::vector<Complex>;

namespace detail {
class FftPlans;
}

// Periodic Fourier collocation grid on [-L, L).
//
// Nodes are uniform with spacing 2L/N and node[0] = -L. Wavenumbers are
// xi_k = pi*k/L in standard FFT order (k = 0..N/2-1, -N/2..-1), so the
// array holds exactly one zero mode and the unpaired Nyquist mode k = -N/2.
// Fields stay real in physical space; every multiplier application takes
// the real (even) part of the symbol at the Nyquist bin, which zeroes the
// contribution of odd symbols there.
//
// Grids are immutable after construction and cheap to copy; the transform
// plans are shared and safe to use concurrently (each call works on its
// own buffers).
class SpectralGrid {
 public:
  SpectralGrid(double half_length, int n_points);

  double half_length() const { return half_length_; }
  int n_points() const { return n_; }
  double spacing() const { return 2.0 * half_length_ / n_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }

  int spectrum_size() const { return n_ / 2 + 1; }
  // xi_k = pi*k/L for k in [0, N/2].
  double xi(int k) const;

  // Unnormalized forward transform (plain DFT sum).
  Spectrum forward(std::span<const double> field) const;
  // Inverse transform with the 1/N normalization.
  std::vector<double> inverse(Spectrum spectrum) const;

  // Buffer-reusing forms for hot loops. `forward_into` leaves `in` intact;
  // `inverse_into` may clobber `in`.
  void forward_into(const double* in, Complex* out) const;
  void inverse_into(Complex* in, double* out) const;

 private:
  double half_length_;
  int n_;
  std::vector<double> nodes_;
  std::vector<double> wavenumbers_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

// Factory with the precondition checks (n_points a power of two >= 8,
// half_length > 0); throws ConfigError otherwise.
SpectralGrid make_grid(double half_length, int n_points);

// Pointwise spectral multiplication by `multiplier[k]` at xi_k, k = 0..N/2.
// Unchecked fast path: the real part is taken at the DC and Nyquist bins.
std::vector<double> apply_multiplier(std::span<const double> field,
                                     std::span<const Complex> multiplier,
                                     const SpectralGrid& grid);

// Applies a scalar symbol s(xi). The symbol must satisfy the conjugate
// symmetry s(-xi) = conj(s(xi)); a violation whose implied imaginary residue
// exceeds 1e-10 of the field scale raises SymmetryError.
std::vector<double> apply_symbol(std::span<const double> field,
                                 const std::function<Complex(double)>& symbol,
                                 const SpectralGrid& grid);

// Riesz potential D^order: multiplier |xi|^order.
std::vector<double> fractional_derivative(std::span<const double> field,
                                          double order,
                                          const SpectralGrid& grid);

// Exact inverse of v -> v + (5/4) D^alpha v (the multiplier never vanishes).
std::vector<double> invert_bbm_operator(std::span<const double> field,
                                        double alpha, const SpectralGrid& grid);

// d/dx via the i*xi multiplier (Nyquist zeroed).
std::vector<double> spectral_derivative(std::span<const double> field,
                                        const SpectralGrid& grid);

// u(x) -> u(x - shift), any real shift (phase factor in spectral space).
std::vector<double> translate(std::span<const double> field, double shift,
                              const SpectralGrid& grid);

// Evaluates the interpolating trigonometric polynomial of a half spectrum at
// an arbitrary point x in [-L, L).
double eval_series(const Spectrum& spectrum, double x, const SpectralGrid& grid);

// Periodic quadratures (the rectangle rule, spectrally exact).
double quadrature(std::span<const double> field, const SpectralGrid& grid);
double quadrature_sq(std::span<const double> field, const SpectralGrid& grid);
// Parseval evaluation of the same integral of f^2 from the half spectrum.
double spectral_norm_sq(const Spectrum& spectrum, const SpectralGrid& grid);

// Relative magnitude of the top third of the spectrum; the runtime
// de-aliasing check compares this against 1e-12.
double spectral_tail_fraction(std::span<const double> field,
                              const SpectralGrid& grid);

}  // namespace gfbbm

#endif
