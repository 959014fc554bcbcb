#ifndef GFBBM_ERRORS_HPP
#define GFBBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gfbbm {

// Every failure surfaced by the library names its class; the CLI maps the
// class to an exit code and prints it on stderr.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* kind() const noexcept { return "error"; }
};

struct ConfigError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

struct DimensionError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "dimension"; }
};

struct SymmetryError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "symmetry"; }
};

// Parameters outside the region where a solitary wave exists.
struct ExistenceError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "existence"; }
};

// alpha <= p/(p+2): the Hamiltonian (and the ground state) is undefined.
struct HamiltonianError : ExistenceError {
  using ExistenceError::ExistenceError;
  const char* kind() const noexcept override { return "hamiltonian-undefined"; }
};

struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, double last_residual)
      : Error(msg), last_residual(last_residual) {}
  const char* kind() const noexcept override { return "non-convergence"; }
  double last_residual;
};

struct DivergenceError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "divergence"; }
};

struct DomainError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

struct DegenerateInputError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate-input"; }
};

struct ResourceError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "resource"; }
};

struct NumericError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "numeric"; }
};

struct BlowUpError : Error {
  BlowUpError(const std::string& msg, double last_finite_time)
      : Error(msg), last_finite_time(last_finite_time) {}
  const char* kind() const noexcept override { return "blow-up"; }
  double last_finite_time;
};

struct IoError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

}  // namespace gfbbm

#endif
