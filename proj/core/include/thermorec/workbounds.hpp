#pragma once

// Work bounds for a transition rho -> sigma, all in units of kT: the
// relative-entropy difference Delta, alpha-optimized bounds from the Renyi
// family and recovery-fidelity lower bounds.

#include <optional>
#include <vector>

#include "thermorec/channel.hpp"
#include "thermorec/divergence.hpp"

namespace thermorec {

/// D(rho||tau) - D(sigma||tau). `finite` is false when either term is
/// infinite; the value is then +inf, -inf or NaN (both infinite).
struct DeltaResult {
  double value = 0.0;
  bool finite = true;
};

DeltaResult delta(const DensityMatrix& rho, const DensityMatrix& sigma, const DensityMatrix& tau);

/// Candidate Renyi orders, ascending; +inf allowed as the last entry.
struct AlphaGrid {
  std::vector<double> points;
  int refinement_rounds = 3;

  /// {0, 0.1, ..., 0.9, 0.99, 1, 1.01, 1.25, 1.5, 2, 3, 5, 10, 50, inf}
  static AlphaGrid standard();
  /// Midpoints inserted between consecutive finite points.
  AlphaGrid densified() const;
};

struct AlphaSample {
  double alpha;
  double value;
};

struct AlphaOptimum {
  double value = 0.0;
  double alpha = 1.0;
  /// The optimum is unbounded (-inf for an infimum, +inf for a supremum).
  bool unbounded = false;
  /// Every evaluated (alpha, D_alpha difference) pair, ascending in alpha.
  std::vector<AlphaSample> trace;
};

/// inf_alpha [D_alpha(rho||tau) - D_alpha(sigma||tau)].
AlphaOptimum nano_gain_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                             const DensityMatrix& tau, const AlphaGrid& grid = AlphaGrid::standard());

/// sup_alpha [D_alpha(sigma||tau) - D_alpha(rho||tau)]; never below the
/// alpha = 1 value D(sigma||tau) - D(rho||tau).
AlphaOptimum nano_invest_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                               const DensityMatrix& tau, const AlphaGrid& grid = AlphaGrid::standard());

struct RecoveryBound {
  /// Relative-entropy drop of the transition the operation implements.
  double delta = 0.0;
  /// D(target || R(image)).
  double recovery_divergence = 0.0;
  /// -log F_squared(target, R(image)).
  double bound = 0.0;
  DensityMatrix recovered;
  /// delta >= recovery_divergence >= bound up to 1e-10.
  bool chain_holds = false;
};

/// `t` must map rho to sigma (trace distance <= 1e-8). Returns the bound
/// -log F_squared(rho, R(sigma)) with R = reversal(t).
RecoveryBound recovery_gain_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  const ThermalOperation& t);

/// `t` must map sigma to rho (the gain direction). Returns
/// -log F_squared(sigma, R(rho)) with R = reversal(t).
RecoveryBound recovery_invest_bound(const DensityMatrix& rho, const DensityMatrix& sigma,
                                    const ThermalOperation& t);

struct WorkReport {
  double delta = 0.0;
  double w_gain_std = 0.0;
  double w_inv_std = 0.0;
  AlphaOptimum nano_gain;
  AlphaOptimum nano_invest;
  std::optional<double> recovery_fidelity_bound;
};

WorkReport work_report(const DensityMatrix& rho, const DensityMatrix& sigma, const DensityMatrix& tau,
                       const AlphaGrid& grid = AlphaGrid::standard(),
                       const ThermalOperation* transition = nullptr);

}  // namespace thermorec
