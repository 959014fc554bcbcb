#ifndef GFBBM_CONSERVED_HPP
#define GFBBM_CONSERVED_HPP

#include <span>

#include "gfbbm/model.hpp"
#include "gfbbm/spectral.hpp"

namespace gfbbm {

// The three conserved quantities of the flow, as periodic quadratures.

// I = integral of u.
double mass(std::span<const double> u, const SpectralGrid& grid);

// F = 1/2 integral of u^2 + (5/4)|D^{alpha/2}u|^2.
double momentum(std::span<const double> u, double alpha,
                const SpectralGrid& grid);

// H = -1/2 integral of u^2 + u^{p+2}/(p+2) + (3/4)|D^{alpha/2}u|^2.
double energy(std::span<const double> u, const ModelParams& params,
              const SpectralGrid& grid);

// Squared F-weighted norm: integral of v^2 + (5/4)|D^{alpha/2}v|^2
// (the H^{alpha/2}-equivalent norm used for orbital distances).
double f_norm_sq(std::span<const double> v, double alpha,
                 const SpectralGrid& grid);

}  // namespace gfbbm

#endif
