#pragma once

// n-catalytic thermal operations: an energy-conserving V on
// S (x) B (x) C_1 (x) ... (x) C_n whose catalyst marginals return to their
// initial states for a designated input. Correlations between catalysts, and
// between catalysts and the system, are allowed.

#include <cstdint>
#include <vector>

#include "thermorec/channel.hpp"
#include "thermorec/sampling.hpp"

namespace thermorec {

struct CatalystSet {
  std::vector<EnvironmentFactor> catalysts;

  std::size_t size() const { return catalysts.size(); }
  Index total_dim() const;
};

struct ClassFlags {
  bool is_cto = false;   // at most one catalyst, output product with the system
  bool is_ccto = false;  // catalysts may correlate among themselves only
  bool is_ncto = false;  // marginals return; any correlations allowed
};

class NctoInstance {
 public:
  /// Records the marginal-return residuals for `designated_input`; does not
  /// throw when they exceed eps_cat (see marginals_return()).
  NctoInstance(EnergyConservingUnitary v, HamiltonianSpec system_h, HamiltonianSpec bath_h, double beta,
               CatalystSet catalysts, DensityMatrix designated_input);

  /// As the constructor, but throws ValidationError unless every catalyst
  /// marginal returns within eps_cat.
  static NctoInstance create_strict(EnergyConservingUnitary v, HamiltonianSpec system_h,
                                    HamiltonianSpec bath_h, double beta, CatalystSet catalysts,
                                    DensityMatrix designated_input);

  const ThermalOperation& operation() const { return op_; }
  const CatalystSet& catalysts() const { return catalysts_; }
  const DensityMatrix& designated_input() const { return input_; }
  const std::vector<double>& catalyst_residuals() const { return residuals_; }
  bool marginals_return() const;
  const ClassFlags& flags() const { return flags_; }

 private:
  ThermalOperation op_;
  CatalystSet catalysts_;
  DensityMatrix input_;
  std::vector<double> residuals_;
  ClassFlags flags_;
};

struct NctoOutput {
  DensityMatrix sigma_sc;
  DensityMatrix sigma_s;
  /// ||Tr_{S, C \ C_i}[sigma_SC] - eta_i||_1 per catalyst.
  std::vector<double> catalyst_residuals;
  /// Tr[H (V X V^dag - X)] for the full input X, H the total Hamiltonian.
  double energy_change;
};

NctoOutput apply_ncto(const NctoInstance& inst, const DensityMatrix& rho);

struct FixedPointReport {
  /// System returns tau_S and every catalyst returns eta_i within eps_cat.
  bool lemma_applicable = false;
  double system_residual = 0.0;
  std::vector<double> catalyst_residuals;
  /// ||V X V^dag - X||_1 for X = tau_S (x) tau_B (x) eta_1 (x) ...
  double global_residual = 0.0;
  /// global_residual <= 1e-8; only meaningful when lemma_applicable.
  bool product_holds = false;
  /// Tr[H_B rho_B] - Tr[H_B tau_B] for the output bath marginal rho_B.
  double bath_energy_shift = 0.0;
  /// S(rho_B) - S(tau_B).
  double bath_entropy_gap = 0.0;
};

FixedPointReport check_fixed_point_product(const NctoInstance& inst);

/// V replaced by V^dag with the same bath and catalysts; designated input
/// tau_S.
NctoInstance reversal_ncto(const NctoInstance& inst);

struct GeneralTheoremCheck {
  double delta = 0.0;
  double recovery_divergence = 0.0;
  /// |delta - D(rho (x) rho_E || V^dag (sigma (x) rho_E) V)|.
  double identity_residual = 0.0;
  bool inequality_holds = false;
};

/// For sigma = apply_ncto(inst, rho).sigma_s: D(rho||tau) - D(sigma||tau)
/// against D(rho || R(sigma)) with R = reversal_ncto(inst).
GeneralTheoremCheck check_general_theorem(const NctoInstance& inst, const DensityMatrix& rho);

enum class NctoFamily {
  ThermalCatalysts,  // eta_i = tau_{C_i}, V Haar on the blocks of the total H
  IdleCatalysts,     // V = V_SB (x) I_C
  SpectralFunction,  // V = exp(i theta H), diagonal eta_i
  Swap,              // swap S with an identical thermal catalyst
  Generic,           // diagonal non-thermal eta_i, V Haar on blocks
};

/// Random instance of the given family with designated input tau_S. Swap
/// needs a catalyst of the system's dimension and falls back to
/// ThermalCatalysts otherwise.
NctoInstance sample_ncto_instance(Index system_dim, Index bath_dim, const std::vector<Index>& catalyst_dims,
                                  NctoFamily family, Rng& rng);

}  // namespace thermorec
