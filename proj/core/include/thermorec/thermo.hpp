#pragma once

// Hamiltonians, Gibbs states, partition functions, free energies and the
// two-level wit battery. Energies are in a caller-chosen unit E0 and beta
// carries the inverse unit, so kT = 1/beta; work values are reported in
// units of kT.

#include <vector>

#include "thermorec/operator.hpp"

namespace thermorec {

class HamiltonianSpec {
 public:
  explicit HamiltonianSpec(const HermitianOperator& h);

  static HamiltonianSpec diagonal(std::span<const double> energies);
  static HamiltonianSpec diagonal(std::initializer_list<double> energies) {
    return diagonal(std::span<const double>(energies.begin(), energies.size()));
  }

  /// H_1 (x) I (x) ... + I (x) H_2 (x) ... + ..., factors in the given order.
  static HamiltonianSpec local_sum(std::span<const HamiltonianSpec> parts);

  Index dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  /// Ascending energies.
  const RealVector& energies() const { return energies_; }
  /// Columns are eigenvectors matching energies().
  const ComplexMatrix& eigenbasis() const { return basis_; }
  /// Eigen-indices grouped by degenerate energy, ascending.
  const std::vector<std::vector<Index>>& blocks() const { return blocks_; }
  double degeneracy_tolerance() const { return eps_deg_; }
  /// max |E|, at least tiny positive so it can be divided by.
  double spectral_radius() const;

 private:
  HermitianOperator op_;
  RealVector energies_;
  ComplexMatrix basis_;
  std::vector<std::vector<Index>> blocks_;
  double eps_deg_ = 0.0;
};

struct GibbsState {
  DensityMatrix state;
  double beta;
  double log_partition;
};

/// exp(-beta H)/Z built in the eigenbasis of `h`; log Z via log-sum-exp.
GibbsState gibbs_state(const HamiltonianSpec& h, double beta);

/// Tr[H rho] - S(rho)/beta. Cross-checked against the relative-entropy form
/// (1/beta)[D(rho||tau) - log Z]; disagreement beyond 1e-9 throws
/// std::logic_error. beta must be positive and finite.
double free_energy(const DensityMatrix& rho, const HamiltonianSpec& h, double beta);
double free_energy_relative_form(const DensityMatrix& rho, const HamiltonianSpec& h, double beta);

double mean_energy(const DensityMatrix& rho, const HamiltonianSpec& h);

/// Two-level battery with Hamiltonian W |1><1|.
class WitBattery {
 public:
  explicit WitBattery(double gap);

  double gap() const { return gap_; }
  HamiltonianSpec hamiltonian() const { return HamiltonianSpec::diagonal({0.0, gap_}); }

 private:
  double gap_;
};

/// rho (x) |level><level| on system (x) battery.
DensityMatrix augment_with_wit(const DensityMatrix& rho, const WitBattery& wit, int level);

/// H_S (x) I + I (x) W|1><1|.
HamiltonianSpec with_wit(const HamiltonianSpec& h, const WitBattery& wit);

}  // namespace thermorec
