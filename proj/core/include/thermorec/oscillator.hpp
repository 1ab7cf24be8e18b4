#pragma once

// Landauer erasure of a qubit with gap E_S against a harmonic-oscillator bath
// of frequency E_S (hbar omega = E_S). Energies are measured in units of E_S,
// so beta * E_S is the single dimensionless parameter.
//
// The bath is truncated at level n_max. The pairs |0>|n>, |1>|n-1> for
// n = 1..n_max are mixed by [[sqrt b, sqrt(1-b)], [sqrt(1-b), -sqrt b]]; the
// state |1>|n_max> has no partner inside the truncation and is left alone.

#include <optional>

#include "thermorec/channel.hpp"

namespace thermorec {

inline constexpr double kDefaultTruncationTail = 1e-12;

class OscillatorInstance {
 public:
  /// p0 must lie in [1 - e^{-beta E_S}, 1]. Without `n_max` the truncation is
  /// the smallest level with e^{-(n_max+1) beta E_S}/(1 - e^{-beta E_S}) <= tail.
  static OscillatorInstance create(double beta_e, double p0, std::optional<int> n_max = std::nullopt,
                                   double tail = kDefaultTruncationTail);

  double beta_e() const { return beta_e_; }
  double p0() const { return p0_; }
  double p1() const { return 1.0 - p0_; }
  int n_max() const { return n_max_; }
  /// Mixing parameter (p0 Z_B - 1)/(Z_B - 1) of the untruncated bath.
  double b() const { return b_; }
  /// 1/(1 - e^{-beta E_S}).
  double bath_partition() const;
  /// 1 + e^{-beta E_S}.
  double system_partition() const;
  double truncation_tail() const;

  HamiltonianSpec system_hamiltonian() const;
  HamiltonianSpec bath_hamiltonian() const;
  /// diag(p0, 1 - p0).
  DensityMatrix mixed_state() const;

 private:
  OscillatorInstance(double beta_e, double p0, int n_max, double b)
      : beta_e_(beta_e), p0_(p0), n_max_(n_max), b_(b) {}

  double beta_e_;
  double p0_;
  int n_max_;
  double b_;
};

/// Smallest n_max meeting the tail bound.
int auto_truncation(double beta_e, double tail = kDefaultTruncationTail);

EnergyConservingUnitary build_unitary(const OscillatorInstance& inst);

/// The thermal operation generated by build_unitary with the truncated bath.
ThermalOperation thermal_operation(const OscillatorInstance& inst);

/// The channel applied to |0><0|; approximately diag(p0, 1 - p0).
DensityMatrix forward_state(const OscillatorInstance& inst);

struct ReversalPopulations {
  double p0_matrix;
  double p1_matrix;
  double p0_closed;
  double p1_closed;
  /// max of the two population differences.
  double residual;
};

/// Ground/excited populations of Tr_B[U (rho (x) tau_B) U^dag] with
/// rho = diag(p0, 1 - p0), from the full matrices and from
/// P0 = p0^2 + (1 - p0)^2 e^{beta E_S}.
ReversalPopulations reversal_populations(const OscillatorInstance& inst);

/// -log[p0^2 + (1 - p0)^2 e^{beta E_S}] in units of kT.
double invest_bound(const OscillatorInstance& inst);

/// invest_bound next to the generic matrix pipeline (recovery_invest_bound
/// for rho = diag(p0, 1-p0), sigma = |0><0|).
struct InvestBoundCheck {
  double closed_form;
  double matrix;
  double residual;
};
InvestBoundCheck invest_bound_check(const OscillatorInstance& inst);

}  // namespace thermorec
