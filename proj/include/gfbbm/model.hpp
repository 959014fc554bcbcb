#ifndef GFBBM_MODEL_HPP
#define GFBBM_MODEL_HPP

#include <cmath>
#include <limits>
#include <string>

#include "gfbbm/errors.hpp"

namespace gfbbm {

// Solitary waves come in two families: positive ones travel with c > 1,
// negative ones with c < 3/5 (odd p only). The strip [3/5, 1] is empty.
enum class Branch { Positive, Negative, None };

// The model triple (alpha, p, c): fractional order, nonlinearity order and
// wave speed u_t + u_x + (1/2)(u^{p+1})_x + (3/4)D^alpha u_x
// + (5/4)D^alpha u_t = 0.
struct ModelParams {
  double alpha = 2.0;
  int p = 1;
  double c = 1.5;

  Branch branch() const {
    if (c > 1.0) return Branch::Positive;
    if (c < 0.6 && p % 2 == 1) return Branch::Negative;
    return Branch::None;
  }

  // The Hamiltonian (and the normalized ground state) requires
  // alpha > p/(p+2); for alpha < 1 this is the same as p < 2*alpha/(1-alpha).
  bool hamiltonian_defined() const {
    return alpha > static_cast<double>(p) / (p + 2);
  }

  double p_max() const {
    if (alpha >= 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 * alpha / (1.0 - alpha);
  }

  void validate() const {
    if (!(alpha > 0.0) || alpha > 2.0)
      throw ConfigError("alpha must lie in (0, 2], got " +
                        std::to_string(alpha));
    if (p < 1) throw ConfigError("p must be a positive integer, got " +
                                 std::to_string(p));
    if (!(c > 0.0))
      throw ConfigError("wave speed c must be positive, got " +
                        std::to_string(c));
  }
};

}  // namespace gfbbm

#endif
