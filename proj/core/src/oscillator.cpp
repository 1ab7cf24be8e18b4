#include "thermorec/oscillator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "thermorec/workbounds.hpp"

namespace thermorec {
namespace {

// Slack on the lower end of the admissible p0 interval.
constexpr double kIntervalSlack = 1e-12;

}  // namespace

int auto_truncation(double beta_e, double tail) {
  if (!(beta_e > 0.0) || !std::isfinite(beta_e)) throw ValidationError("beta*E_S must be positive");
  if (!(tail > 0.0)) throw ValidationError("truncation tail must be positive");
  const double q = std::exp(-beta_e);
  int n = 0;
  while (std::pow(q, n + 1) / (1.0 - q) > tail) {
    ++n;
    if (n > 100000) throw ValidationError("truncation level too large for beta*E_S");
  }
  return n;
}

OscillatorInstance OscillatorInstance::create(double beta_e, double p0, std::optional<int> n_max,
                                              double tail) {
  if (!(beta_e > 0.0) || !std::isfinite(beta_e)) throw ValidationError("beta*E_S must be positive and finite");
  const double lower = 1.0 - std::exp(-beta_e);
  if (!(p0 >= lower - kIntervalSlack && p0 <= 1.0)) {
    throw ValidationError("p0 = " + std::to_string(p0) + " outside the admissible interval [" +
                          std::to_string(lower) + ", 1]");
  }
  const int levels = n_max.has_value() ? *n_max : auto_truncation(beta_e, tail);
  if (levels < 1) throw ValidationError("bath truncation must keep at least two levels");
  const double z_b = 1.0 / (1.0 - std::exp(-beta_e));
  const double b = std::clamp((p0 * z_b - 1.0) / (z_b - 1.0), 0.0, 1.0);
  return OscillatorInstance(beta_e, p0, levels, b);
}

double OscillatorInstance::bath_partition() const { return 1.0 / (1.0 - std::exp(-beta_e_)); }

double OscillatorInstance::system_partition() const { return 1.0 + std::exp(-beta_e_); }

double OscillatorInstance::truncation_tail() const {
  const double q = std::exp(-beta_e_);
  return std::pow(q, n_max_ + 1) / (1.0 - q);
}

HamiltonianSpec OscillatorInstance::system_hamiltonian() const { return HamiltonianSpec::diagonal({0.0, 1.0}); }

HamiltonianSpec OscillatorInstance::bath_hamiltonian() const {
  std::vector<double> e(static_cast<std::size_t>(n_max_ + 1));
  for (std::size_t n = 0; n < e.size(); ++n) e[n] = static_cast<double>(n);
  return HamiltonianSpec::diagonal(e);
}

DensityMatrix OscillatorInstance::mixed_state() const {
  const std::array<double, 2> p{p0_, 1.0 - p0_};
  return DensityMatrix::diagonal(p);
}

EnergyConservingUnitary build_unitary(const OscillatorInstance& inst) {
  const Index levels = inst.n_max() + 1;
  const Index dim = 2 * levels;
  const auto idx = [levels](Index s, Index n) { return s * levels + n; };
  const double sb = std::sqrt(inst.b());
  const double sc = std::sqrt(1.0 - inst.b());

  ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
  u(idx(0, 0), idx(0, 0)) = 1.0;
  for (Index n = 1; n < levels; ++n) {
    const Index g = idx(0, n);
    const Index e = idx(1, n - 1);
    u(g, g) = sb;
    u(e, g) = sc;
    u(g, e) = sc;
    u(e, e) = -sb;
  }
  u(idx(1, levels - 1), idx(1, levels - 1)) = 1.0;

  const std::array<HamiltonianSpec, 2> parts{inst.system_hamiltonian(), inst.bath_hamiltonian()};
  return EnergyConservingUnitary(std::move(u), HamiltonianSpec::local_sum(parts));
}

ThermalOperation thermal_operation(const OscillatorInstance& inst) {
  return ThermalOperation(build_unitary(inst), inst.system_hamiltonian(), inst.bath_hamiltonian(),
                          inst.beta_e());
}

DensityMatrix forward_state(const OscillatorInstance& inst) {
  return apply(thermal_operation(inst), DensityMatrix::basis_state(2, 0));
}

ReversalPopulations reversal_populations(const OscillatorInstance& inst) {
  // U is Hermitian, so the reversal of the gain-direction operation is the
  // same channel.
  const DensityMatrix out = apply(reversal(thermal_operation(inst)), inst.mixed_state());
  const double p0 = inst.p0();
  const double closed = p0 * p0 + (1.0 - p0) * (1.0 - p0) * std::exp(inst.beta_e());
  ReversalPopulations r{};
  r.p0_matrix = out.matrix()(0, 0).real();
  r.p1_matrix = out.matrix()(1, 1).real();
  r.p0_closed = closed;
  r.p1_closed = 1.0 - closed;
  r.residual = std::max(std::abs(r.p0_matrix - r.p0_closed), std::abs(r.p1_matrix - r.p1_closed));
  return r;
}

double invest_bound(const OscillatorInstance& inst) {
  const double p0 = inst.p0();
  return -std::log(p0 * p0 + (1.0 - p0) * (1.0 - p0) * std::exp(inst.beta_e()));
}

InvestBoundCheck invest_bound_check(const OscillatorInstance& inst) {
  const ThermalOperation t = thermal_operation(inst);
  const DensityMatrix sigma = DensityMatrix::basis_state(2, 0);
  // The operation maps |0><0| to diag(p0, p1) only up to the truncation tail,
  // so the recovery is evaluated against its actual image.
  const DensityMatrix rho = apply(t, sigma);
  const double matrix = recovery_invest_bound(rho, sigma, t).bound;
  const double closed = invest_bound(inst);
  return {closed, matrix, std::abs(closed - matrix)};
}

}  // namespace thermorec
