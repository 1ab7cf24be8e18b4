#pragma once

// Entropies, relative entropies, the alpha-Renyi families and fidelity.
// All logarithms are natural.

#include <limits>

#include "thermorec/operator.hpp"

namespace thermorec {

/// Extended-real divergence value. `finite` is false exactly when the value
/// is +infinity; `support_ok` reports the support condition relevant to the
/// divergence that produced it.
struct DivergenceResult {
  double value = 0.0;
  bool finite = true;
  bool support_ok = true;

  static DivergenceResult of(double v) { return {v, true, true}; }
  static DivergenceResult infinite() {
    return {std::numeric_limits<double>::infinity(), false, false};
  }
};

enum class RenyiVariant { Petz, Sandwiched };

/// alpha >= 0 or +infinity. Petz form below 1/2, sandwiched at and above.
class AlphaFamilySpec {
 public:
  explicit AlphaFamilySpec(double alpha);

  static AlphaFamilySpec infinity() {
    return AlphaFamilySpec(std::numeric_limits<double>::infinity());
  }

  double alpha() const { return alpha_; }
  RenyiVariant variant() const { return alpha_ < 0.5 ? RenyiVariant::Petz : RenyiVariant::Sandwiched; }
  bool is_infinite() const { return alpha_ == std::numeric_limits<double>::infinity(); }

 private:
  double alpha_;
};

/// |alpha - 1| below this is evaluated as the relative entropy.
inline constexpr double kAlphaOneWindow = 1e-6;

double von_neumann_entropy(const DensityMatrix& rho);

/// D(rho||sigma) = Tr[rho log rho] - Tr[rho log sigma]; +inf unless
/// supp(rho) is contained in supp(sigma).
DivergenceResult relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

DivergenceResult renyi_divergence(const DensityMatrix& rho, const DensityMatrix& sigma,
                                  const AlphaFamilySpec& spec);

/// D_max = log min{lambda : rho <= lambda sigma}.
DivergenceResult max_divergence(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Both conventions: root = Tr sqrt(sqrt(rho) sigma sqrt(rho)), squared = root^2.
struct Fidelity {
  double root = 0.0;
  double squared = 0.0;
};

Fidelity fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Trace form of D(eta_CD||theta_CD) - D(eta_D||theta_D) for a bipartite
/// C (x) D pair:
///   Tr(eta_CD [log eta_CD - log theta_CD - log I_C (x) eta_D + log I_C (x) theta_D]).
/// `space` must have exactly two factors, C first.
double divergence_drop_trace_form(const DensityMatrix& eta_cd, const DensityMatrix& theta_cd,
                                  const CompositeSpace& space);

}  // namespace thermorec
