#include "thermorec/catalysis.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "thermorec/divergence.hpp"

namespace thermorec {
namespace {

constexpr double kProductTol = 1e-8;
constexpr double kChainSlack = 1e-10;

std::vector<std::size_t> system_and_catalysts(std::size_t n) {
  std::vector<std::size_t> keep{0};
  for (std::size_t i = 0; i < n; ++i) keep.push_back(i + 2);
  return keep;
}

std::vector<double> marginal_residuals(const ComplexMatrix& joint, const CompositeSpace& space,
                                       const CatalystSet& cats) {
  std::vector<double> out;
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const ComplexMatrix marg = partial_trace(joint, space, {i + 2});
    out.push_back(trace_norm(marg - cats.catalysts[i].state.matrix()));
  }
  return out;
}

ClassFlags classify(const ThermalOperation& op, const CatalystSet& cats, const DensityMatrix& input,
                    const std::vector<double>& residuals) {
  ClassFlags flags;
  const double eps = tolerances().catalyst;
  bool returns = true;
  for (double r : residuals) returns = returns && r <= eps;
  flags.is_ncto = returns;
  if (!returns) return flags;
  if (cats.size() == 0) {
    flags.is_ccto = flags.is_cto = true;
    return flags;
  }
  const CompositeSpace space = op.space();
  const ComplexMatrix joint = op.dilate(input.matrix());
  const ComplexMatrix sigma_sc = partial_trace(joint, space, system_and_catalysts(cats.size()));
  std::vector<Index> sc_dims{op.system_dim()};
  std::vector<std::size_t> cat_factors;
  for (std::size_t i = 0; i < cats.size(); ++i) {
    sc_dims.push_back(cats.catalysts[i].state.dim());
    cat_factors.push_back(i + 1);
  }
  const CompositeSpace sc_space(sc_dims);
  const ComplexMatrix sigma_s = partial_trace(sigma_sc, sc_space, {0});
  const ComplexMatrix sigma_c = partial_trace(sigma_sc, sc_space, cat_factors);
  const bool uncorrelated = trace_norm(sigma_sc - kron(sigma_s, sigma_c)) <= eps;
  flags.is_ccto = uncorrelated;
  flags.is_cto = uncorrelated && cats.size() == 1;
  return flags;
}

ComplexMatrix swap_first_catalyst(const CompositeSpace& space) {
  const Index n = space.total_dim();
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (Index g = 0; g < n; ++g) {
    std::vector<Index> d = space.digits(g);
    std::swap(d[0], d[2]);
    p(space.global_index(d), g) = 1.0;
  }
  return p;
}

}  // namespace

Index CatalystSet::total_dim() const {
  Index d = 1;
  for (const auto& c : catalysts) d *= c.state.dim();
  return d;
}

NctoInstance::NctoInstance(EnergyConservingUnitary v, HamiltonianSpec system_h, HamiltonianSpec bath_h,
                           double beta, CatalystSet catalysts, DensityMatrix designated_input)
    : op_(std::move(v), std::move(system_h), std::move(bath_h), beta, catalysts.catalysts),
      catalysts_(std::move(catalysts)),
      input_(std::move(designated_input)) {
  if (input_.dim() != op_.system_dim()) throw ValidationError("designated input has the wrong dimension");
  residuals_ = marginal_residuals(op_.dilate(input_.matrix()), op_.space(), catalysts_);
  flags_ = classify(op_, catalysts_, input_, residuals_);
}

NctoInstance NctoInstance::create_strict(EnergyConservingUnitary v, HamiltonianSpec system_h,
                                         HamiltonianSpec bath_h, double beta, CatalystSet catalysts,
                                         DensityMatrix designated_input) {
  NctoInstance inst(std::move(v), std::move(system_h), std::move(bath_h), beta, std::move(catalysts),
                    std::move(designated_input));
  if (!inst.marginals_return()) {
    double worst = 0.0;
    for (double r : inst.residuals_) worst = std::max(worst, r);
    throw ValidationError("catalyst marginals do not return (worst trace distance " +
                          std::to_string(worst) + ")");
  }
  return inst;
}

bool NctoInstance::marginals_return() const {
  for (double r : residuals_) {
    if (r > tolerances().catalyst) return false;
  }
  return true;
}

NctoOutput apply_ncto(const NctoInstance& inst, const DensityMatrix& rho) {
  const ThermalOperation& op = inst.operation();
  const CompositeSpace space = op.space();
  const ComplexMatrix joint = op.dilate(rho.matrix());
  const ComplexMatrix input = kron(rho.matrix(), op.env_state().matrix());
  const ComplexMatrix& h = op.unitary().hamiltonian().op().matrix();
  const double energy_change = (h * (joint - input)).trace().real();
  DensityMatrix sigma_sc(partial_trace(joint, space, system_and_catalysts(inst.catalysts().size())));
  DensityMatrix sigma_s(partial_trace(joint, space, {0}));
  return {std::move(sigma_sc), std::move(sigma_s), marginal_residuals(joint, space, inst.catalysts()),
          energy_change};
}

FixedPointReport check_fixed_point_product(const NctoInstance& inst) {
  const ThermalOperation& op = inst.operation();
  const CompositeSpace space = op.space();
  const DensityMatrix& tau_s = op.system_gibbs().state;
  const ComplexMatrix input = kron(tau_s.matrix(), op.env_state().matrix());
  const ComplexMatrix joint = op.dilate(tau_s.matrix());

  FixedPointReport r;
  r.system_residual = trace_norm(partial_trace(joint, space, {0}) - tau_s.matrix());
  r.catalyst_residuals = marginal_residuals(joint, space, inst.catalysts());
  const double eps = tolerances().catalyst;
  r.lemma_applicable = r.system_residual <= eps;
  for (double c : r.catalyst_residuals) r.lemma_applicable = r.lemma_applicable && c <= eps;
  r.global_residual = trace_norm(joint - input);
  r.product_holds = r.global_residual <= kProductTol;

  const DensityMatrix bath_out = DensityMatrix::normalized(partial_trace(joint, space, {1}));
  const DensityMatrix& bath_in = op.bath_state();
  const ComplexMatrix& hb = op.bath_hamiltonian().op().matrix();
  r.bath_energy_shift = (hb * (bath_out.matrix() - bath_in.matrix())).trace().real();
  r.bath_entropy_gap = von_neumann_entropy(bath_out) - von_neumann_entropy(bath_in);
  return r;
}

NctoInstance reversal_ncto(const NctoInstance& inst) {
  const ThermalOperation& op = inst.operation();
  return NctoInstance(op.unitary().adjoint(), op.system_hamiltonian(), op.bath_hamiltonian(), op.beta(),
                      inst.catalysts(), op.system_gibbs().state);
}

GeneralTheoremCheck check_general_theorem(const NctoInstance& inst, const DensityMatrix& rho) {
  const ThermalOperation& op = inst.operation();
  const DensityMatrix& tau = op.system_gibbs().state;
  const DensityMatrix sigma = apply_ncto(inst, rho).sigma_s;
  const DensityMatrix recovered = apply(reversal(op), sigma);

  GeneralTheoremCheck c;
  c.delta = relative_entropy(rho, tau).value - relative_entropy(sigma, tau).value;
  c.recovery_divergence = relative_entropy(rho, recovered).value;
  const ComplexMatrix& v = op.unitary().matrix();
  const DensityMatrix lhs(kron(rho.matrix(), op.env_state().matrix()));
  const DensityMatrix rhs(ComplexMatrix(v.adjoint() * kron(sigma.matrix(), op.env_state().matrix()) * v));
  const DivergenceResult joint = relative_entropy(lhs, rhs);
  c.identity_residual = joint.finite ? std::abs(c.delta - joint.value) : std::numeric_limits<double>::infinity();
  c.inequality_holds = c.delta >= c.recovery_divergence - kChainSlack;
  return c;
}

NctoInstance sample_ncto_instance(Index system_dim, Index bath_dim, const std::vector<Index>& catalyst_dims,
                                  NctoFamily family, Rng& rng) {
  if (family == NctoFamily::Swap && (catalyst_dims.empty() || catalyst_dims.front() != system_dim)) {
    family = NctoFamily::ThermalCatalysts;
  }
  std::uniform_real_distribution<double> beta_dist(0.3, 1.5);
  const double beta = beta_dist(rng);
  HamiltonianSpec hs = random_integer_hamiltonian(system_dim, 2, rng);
  HamiltonianSpec hb = random_integer_hamiltonian(bath_dim, 3, rng);

  CatalystSet cats;
  for (std::size_t i = 0; i < catalyst_dims.size(); ++i) {
    const Index d = catalyst_dims[i];
    HamiltonianSpec hc = (family == NctoFamily::Swap && i == 0) ? hs : random_integer_hamiltonian(d, 2, rng);
    const bool thermal = family == NctoFamily::ThermalCatalysts || (family == NctoFamily::Swap && i == 0);
    DensityMatrix eta = thermal ? gibbs_state(hc, beta).state : random_diagonal_state(d, rng, 0.05);
    cats.catalysts.push_back({std::move(eta), std::move(hc)});
  }

  std::vector<HamiltonianSpec> parts{hs, hb};
  for (const auto& c : cats.catalysts) parts.push_back(c.hamiltonian);
  const HamiltonianSpec total = HamiltonianSpec::local_sum(parts);
  const Index cat_dim = cats.total_dim();

  ComplexMatrix v;
  switch (family) {
    case NctoFamily::ThermalCatalysts:
    case NctoFamily::Generic:
      v = sample_energy_conserving_unitary(total, rng()).matrix();
      break;
    case NctoFamily::IdleCatalysts: {
      const HamiltonianSpec sb_parts[] = {hs, hb};
      const ComplexMatrix v_sb = sample_energy_conserving_unitary(HamiltonianSpec::local_sum(sb_parts), rng()).matrix();
      v = kron(v_sb, ComplexMatrix::Identity(cat_dim, cat_dim));
      break;
    }
    case NctoFamily::SpectralFunction: {
      std::uniform_real_distribution<double> angle(-3.0, 3.0);
      const double theta = angle(rng);
      EigenSystem eig{total.energies(), total.eigenbasis()};
      v = spectral_map(eig, [theta](double e) { return std::exp(Complex(0.0, theta * e)); }, false);
      break;
    }
    case NctoFamily::Swap: {
      std::vector<Index> dims{system_dim, bath_dim};
      for (Index d : catalyst_dims) dims.push_back(d);
      v = swap_first_catalyst(CompositeSpace(dims));
      break;
    }
  }
  DensityMatrix tau_s = gibbs_state(hs, beta).state;
  return NctoInstance(EnergyConservingUnitary(std::move(v), total), std::move(hs), std::move(hb), beta,
                      std::move(cats), std::move(tau_s));
}

}  // namespace thermorec
