#include "thermorec/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "thermorec/divergence.hpp"

namespace thermorec {

HamiltonianSpec::HamiltonianSpec(const HermitianOperator& h) : op_(h) {
  EigenSystem eig = op_.eigen();
  const Index n = eig.values.size();
  // EigenSystem is descending; Hamiltonians are kept ascending.
  energies_ = eig.values.reverse();
  basis_ = eig.vectors.rowwise().reverse();

  const double scale = energies_.cwiseAbs().maxCoeff();
  eps_deg_ = tolerances().degeneracy_relative * scale;
  std::vector<Index> current{0};
  for (Index i = 1; i < n; ++i) {
    if (energies_(i) - energies_(current.front()) <= eps_deg_) {
      current.push_back(i);
    } else {
      blocks_.push_back(std::move(current));
      current = {i};
    }
  }
  blocks_.push_back(std::move(current));
}

HamiltonianSpec HamiltonianSpec::diagonal(std::span<const double> energies) {
  return HamiltonianSpec(HermitianOperator::diagonal(energies));
}

HamiltonianSpec HamiltonianSpec::local_sum(std::span<const HamiltonianSpec> parts) {
  if (parts.empty()) throw ValidationError("local_sum of an empty list");
  Index total = 1;
  for (const auto& p : parts) total *= p.dim();
  check_dimension(static_cast<std::size_t>(total));

  ComplexMatrix acc = ComplexMatrix::Zero(total, total);
  Index left = 1;
  for (const auto& p : parts) {
    const Index right = total / (left * p.dim());
    acc += kron(kron(ComplexMatrix::Identity(left, left), p.op().matrix()),
                ComplexMatrix::Identity(right, right));
    left *= p.dim();
  }
  return HamiltonianSpec(HermitianOperator(acc));
}

double HamiltonianSpec::spectral_radius() const {
  const double r = energies_.cwiseAbs().maxCoeff();
  return r > 0.0 ? r : 1.0;
}

GibbsState gibbs_state(const HamiltonianSpec& h, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ValidationError("inverse temperature must be finite and >= 0, got " + std::to_string(beta));
  }
  const RealVector& e = h.energies();
  const double e_min = e.minCoeff();
  RealVector w(e.size());
  for (Index i = 0; i < e.size(); ++i) w(i) = std::exp(-beta * (e(i) - e_min));
  const double sum = w.sum();
  w /= sum;
  const double log_z = -beta * e_min + std::log(sum);
  ComplexMatrix state = h.eigenbasis() * w.cast<Complex>().asDiagonal() * h.eigenbasis().adjoint();
  return {DensityMatrix(state), beta, log_z};
}

double mean_energy(const DensityMatrix& rho, const HamiltonianSpec& h) {
  if (rho.dim() != h.dim()) throw ValidationError("state and Hamiltonian differ in dimension");
  return (h.op().matrix() * rho.matrix()).trace().real();
}

double free_energy_relative_form(const DensityMatrix& rho, const HamiltonianSpec& h, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ValidationError("free energy needs a positive finite beta");
  }
  const GibbsState tau = gibbs_state(h, beta);
  const DivergenceResult d = relative_entropy(rho, tau.state);
  return (d.value - tau.log_partition) / beta;
}

double free_energy(const DensityMatrix& rho, const HamiltonianSpec& h, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ValidationError("free energy needs a positive finite beta");
  }
  const double entropic = mean_energy(rho, h) - von_neumann_entropy(rho) / beta;
  const double relative = free_energy_relative_form(rho, h, beta);
  if (std::abs(entropic - relative) > 1e-9 * std::max(1.0, std::abs(entropic))) {
    throw std::logic_error("free energy forms disagree: " + std::to_string(entropic) + " vs " +
                           std::to_string(relative));
  }
  return entropic;
}

WitBattery::WitBattery(double gap) : gap_(gap) {
  if (!std::isfinite(gap)) throw ValidationError("wit gap must be finite");
}

DensityMatrix augment_with_wit(const DensityMatrix& rho, const WitBattery&, int level) {
  if (level != 0 && level != 1) throw ValidationError("wit level must be 0 or 1");
  return tensor(rho, DensityMatrix::basis_state(2, level));
}

HamiltonianSpec with_wit(const HamiltonianSpec& h, const WitBattery& wit) {
  const HamiltonianSpec parts[] = {h, wit.hamiltonian()};
  return HamiltonianSpec::local_sum(parts);
}

}  // namespace thermorec
