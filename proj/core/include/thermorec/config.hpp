#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thermorec {

/// Raised when an input fails structural validation (shape, Hermiticity,
/// positivity, trace, unitarity, energy conservation, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a scalar function is evaluated outside its domain, e.g. the
/// logarithm of a retained negative eigenvalue.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Numerical tolerances shared by every module.
//
// The process-wide instance is read by the library and written only at
// program start (the CLI applies `--tol-override` before any work begins).
struct Tolerances {
  double hermitian = 1e-12;          // ||M - M^dag||_max, relative to max(1, ||M||_max)
  double psd = 1e-10;                // smallest admissible eigenvalue is -psd
  double trace = 1e-10;              // |Tr rho - 1|
  double rank_relative = 1e-12;      // eps_rank = dim * lambda_max * rank_relative
  double unitary = 1e-10;            // ||U^dag U - I||_max
  double commutator = 1e-10;         // ||[V, H / r(H)]||_max
  double degeneracy_relative = 1e-9; // eps_deg = degeneracy_relative * max|E|
  double catalyst = 1e-9;            // marginal-return, trace norm
  double gibbs_preserving = 1e-9;    // ||S(tau) - tau||_1
  std::size_t max_dim = 4096;        // largest total Hilbert-space dimension
};

const Tolerances& tolerances();
void set_tolerances(const Tolerances& tol);

/// Applies a single `key=value` override. Throws ValidationError on an
/// unknown key or a value below machine epsilon.
void apply_tolerance_override(Tolerances& tol, const std::string& assignment);

/// Throws ValidationError when `dim` exceeds the configured cap.
void check_dimension(std::size_t dim);

}  // namespace thermorec
