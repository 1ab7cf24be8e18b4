#pragma once

// Thermal operations as Stinespring dilations, their reversal, Petz and
// rotated recovery maps, adjoints and superoperator forms.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "thermorec/operator.hpp"
#include "thermorec/thermo.hpp"

namespace thermorec {

/// A unitary V with [V, H] = 0 for a total Hamiltonian H. Validation checks
/// both ||[V, H/r(H)]||_max <= eps_comm and that V has no weight between
/// distinct energy blocks of H.
class EnergyConservingUnitary {
 public:
  EnergyConservingUnitary(ComplexMatrix v, HamiltonianSpec h);

  /// Skips the energy-conservation checks (unitarity is still required).
  /// Only for negative-control fixtures.
  static EnergyConservingUnitary unchecked(ComplexMatrix v, HamiltonianSpec h);

  const ComplexMatrix& matrix() const { return v_; }
  const HamiltonianSpec& hamiltonian() const { return h_; }
  bool validated() const { return validated_; }

  double commutator_residual() const;
  double block_leakage() const;

  EnergyConservingUnitary adjoint() const;

 private:
  EnergyConservingUnitary(ComplexMatrix v, HamiltonianSpec h, bool validate);

  ComplexMatrix v_;
  HamiltonianSpec h_;
  bool validated_ = true;
};

/// Linear map on d x d operators as a d^2 x d^2 matrix acting on
/// column-stacked vectorizations: vec(X)_{i + j d} = X_{ij}.
class Superoperator {
 public:
  explicit Superoperator(ComplexMatrix m);

  static Superoperator identity(Index d);
  static Superoperator from_map(Index d, const std::function<ComplexMatrix(const ComplexMatrix&)>& f);
  /// X -> A X B.
  static Superoperator sandwich(const ComplexMatrix& a, const ComplexMatrix& b);
  static Superoperator mixture(std::span<const double> weights, std::span<const Superoperator> maps);

  Index dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return m_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;
  DensityMatrix apply(const DensityMatrix& rho) const;

  /// Hilbert-Schmidt adjoint: Tr[A^dag S(B)] = Tr[S^dag(A)^dag B].
  Superoperator adjoint() const;
  /// `next` after `this`.
  Superoperator then(const Superoperator& next) const;

  /// sum_ij |i><j| (x) S(|i><j|).
  ComplexMatrix choi() const;
  double trace_preservation_residual() const;
  double min_choi_eigenvalue() const;
  bool is_trace_preserving(double tol = 1e-10) const { return trace_preservation_residual() <= tol; }
  bool is_completely_positive(double tol = 1e-9) const { return min_choi_eigenvalue() >= -tol; }

 private:
  ComplexMatrix m_;
  Index dim_ = 0;
};

/// An environment factor beyond the bath, e.g. a catalyst.
struct EnvironmentFactor {
  DensityMatrix state;
  HamiltonianSpec hamiltonian;
};

/// T(X) = Tr_E[V (X (x) rho_E) V^dag] with rho_E = tau_B (x) eta_1 (x) ...;
/// composite ordering S, B, C_1, ..., C_n.
class ThermalOperation {
 public:
  ThermalOperation(EnergyConservingUnitary v, HamiltonianSpec system_h, HamiltonianSpec bath_h,
                   double beta, std::vector<EnvironmentFactor> extra = {});

  const EnergyConservingUnitary& unitary() const { return v_; }
  const HamiltonianSpec& system_hamiltonian() const { return system_h_; }
  const HamiltonianSpec& bath_hamiltonian() const { return bath_h_; }
  const std::vector<EnvironmentFactor>& extra_factors() const { return extra_; }
  double beta() const { return beta_; }

  Index system_dim() const { return system_h_.dim(); }
  std::vector<Index> env_dims() const;
  /// S, B, C_1, ..., C_n.
  CompositeSpace space() const;
  const DensityMatrix& bath_state() const { return bath_.state; }
  const DensityMatrix& env_state() const { return env_state_; }
  const GibbsState& system_gibbs() const { return system_gibbs_; }

  /// V (x (x) rho_E) V^dag on the full space.
  ComplexMatrix dilate(const ComplexMatrix& x) const;
  /// Tr_E of dilate(x); accepts non-Hermitian x.
  ComplexMatrix apply_raw(const ComplexMatrix& x) const;

 private:
  EnergyConservingUnitary v_;
  HamiltonianSpec system_h_;
  HamiltonianSpec bath_h_;
  double beta_;
  std::vector<EnvironmentFactor> extra_;
  GibbsState bath_;
  GibbsState system_gibbs_;
  DensityMatrix env_state_;
};

DensityMatrix apply(const ThermalOperation& t, const DensityMatrix& rho);

/// Same environment and beta with V replaced by V^dag.
ThermalOperation reversal(const ThermalOperation& t);

Superoperator superoperator(const ThermalOperation& t);

/// X -> Tr_E[rho_E^{1/2} V^dag (X (x) I_E) V rho_E^{1/2}], built from the
/// dilation rather than by transposing superoperator(t).
Superoperator adjoint(const ThermalOperation& t);

struct PetzRecovery {
  Superoperator map;
  /// True when the reference or its image was rank deficient and inverse
  /// powers were taken on the support only.
  bool support_restricted = false;
};

/// theta^{1/2} N^dag[N(theta)^{-1/2} (.) N(theta)^{-1/2}] theta^{1/2}.
PetzRecovery petz_recovery(const Superoperator& n, const Superoperator& n_adjoint,
                           const DensityMatrix& reference);
PetzRecovery petz_recovery(const Superoperator& n, const DensityMatrix& reference);
PetzRecovery petz_recovery(const ThermalOperation& t, const DensityMatrix& reference);

struct QuadratureSpec {
  int nodes = 64;
};

/// Rotated Petz maps
///   R_t(X) = theta^{it/2} R(N(theta)^{-it/2} X N(theta)^{it/2}) theta^{-it/2}
/// and their average against p(t) = (pi/2) / (cosh(pi t) + 1).
class RotatedRecovery {
 public:
  RotatedRecovery(const Superoperator& n, const DensityMatrix& reference);

  ComplexMatrix apply(const ComplexMatrix& x, double t) const;

  /// int p(t) R_t(x) dt via u = tanh(pi t / 2), which maps the density to
  /// the uniform weight 1/2 on (-1, 1); integrated with Gauss-Legendre.
  ComplexMatrix average_raw(const ComplexMatrix& x, QuadratureSpec q = {}) const;
  DensityMatrix average(const DensityMatrix& sigma, QuadratureSpec q = {}) const;

  const PetzRecovery& petz() const { return petz_; }

 private:
  PetzRecovery petz_;
  EigenSystem reference_eig_;
  EigenSystem image_eig_;
};

/// Requires `n` to preserve `tau` (ValidationError otherwise).
DensityMatrix rotated_recovery_average(const Superoperator& n, const DensityMatrix& tau,
                                       const DensityMatrix& sigma, QuadratureSpec q = {});

/// The rotated-map density p(t).
double rotation_density(double t);

/// Haar-random unitary on each degenerate block of `h`, identity across
/// blocks. Deterministic in `seed`.
EnergyConservingUnitary sample_energy_conserving_unitary(const HamiltonianSpec& h, std::uint64_t seed);

/// ||S(tau) - tau||_1 <= eps_gp. `s` must be trace preserving.
bool is_gibbs_preserving(const Superoperator& s, const DensityMatrix& tau);

}  // namespace thermorec
